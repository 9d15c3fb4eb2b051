"""Numerical checks of the comparison theorems on rotationally symmetric data.

Covers Cheng's eigenvalue comparison and Bishop's volume comparison for
warped balls with radial curvature at most ``c``, the Wronskian argument
behind the eigenvalue bound for minimal submanifolds (with the catenoid as
a concrete minimal surface), and the stability criterion for minimal
hypersurfaces.

Every check returns a :class:`CheckReport`; when a hypothesis fails the
report carries a status and makes no claim.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from functools import lru_cache
from typing import Callable

import numpy as np

from . import kernels
from .discrete_domain import build_cylinder_domain, build_radial_domain, smallest_eigenpair
from .errors import DomainError, InputError
from .radial_eigen import (
    DEFAULT_N,
    WarpProfile,
    bisect_first_eigenvalue,
    model_ball_lambda1,
    radial_curvature,
    warped_ball_lambda1,
)
from .seeds import trial_seed
from .spaceform import Context, ModelBall, c_c, s_c, validate_ball

HYPOTHESIS_TOL = 1e-8

#: Default radius per curvature for the seeded corpus.
CORPUS_RADIUS = {-1.0: 2.0, 0.0: 1.0, 1.0: 1.5}


@dataclass
class CheckReport:
    check: str
    theorem: str
    params: dict
    margin: float
    verdict: str
    status: str = "ok"
    seed: int | None = None
    details: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.verdict == "PASS"

    def to_dict(self) -> dict:
        return asdict(self)


def _verdict(ok: bool) -> str:
    return "PASS" if ok else "FAIL"


# ------------------------------------------------------------ warp corpus


def random_warp(c: float, r: float, seed: int, roughness: float,
                N: int = DEFAULT_N, terms: int = 4) -> WarpProfile:
    """Warp with ``f'' + c f = q >= 0``, so the radial curvature is at most ``c``.

    ``q(t) = roughness * (t/r) * sum_k a_k (1 + cos(w_k t^2 + phi_k))`` is odd
    in ``t`` (so the metric stays smooth at the pole) and nonnegative. The
    deviation ``g = f - S_c`` solves ``g'' + c g = q``, ``g(0) = g'(0) = 0``.
    """
    if c > 0 and r >= math.pi / math.sqrt(c):
        raise DomainError("r must be below pi/sqrt(c)")
    if roughness < 0:
        raise InputError("roughness must be nonnegative")
    rng = np.random.default_rng(seed)
    a = rng.uniform(0.0, 1.0, terms) / terms
    w = rng.uniform(0.0, 8.0, terms) / (r * r)
    phi = rng.uniform(0.0, 2 * math.pi, terms)

    def q(t):
        t = np.asarray(t, float)
        osc = (a[:, None] * (1.0 + np.cos(w[:, None] * t[None, :] ** 2 + phi[:, None]))).sum(0)
        return roughness * (t / r) * osc

    h = r / N
    t = np.arange(N + 1) * h
    th = np.arange(2 * N + 1) * (0.5 * h)
    S, C = np.asarray(s_c(c, t)), np.asarray(c_c(c, t))
    g = np.zeros(N + 1)
    dg = np.zeros(N + 1)
    if roughness > 0:
        kernels.integrate_linear2(np.zeros(2 * N + 1), np.full(2 * N + 1, float(c)),
                                  np.ascontiguousarray(q(th)), h, 0, 0.0, 0.0, g, dg, False)
    f = S + g
    return WarpProfile(r, f, C + dg, -c * f + q(t), label=f"random(c={c:g},seed={seed})")


def cheng_compare(warp: WarpProfile, c: float, n: int, tol: float = 1e-8) -> CheckReport:
    """Cheng: radial curvature ``<= c`` forces ``lambda_1(warp) >= lambda_1(model)``."""
    params = {"c": c, "n": n, "r": warp.r, "N": warp.N, "warp": warp.label, "tol": tol}
    K = radial_curvature(warp)
    excess = float(np.max(K - c))
    if excess > HYPOTHESIS_TOL:
        return CheckReport("cheng", "eqCheng2", params, margin=math.nan, verdict="SKIP",
                           status="hypothesis_violated", details={"max_K_minus_c": excess})
    lam_w = warped_ball_lambda1(warp, n).lambda1
    lam_m = model_ball_lambda1(ModelBall(c, n, warp.r), N=warp.N).lambda1
    margin = lam_w - lam_m
    return CheckReport("cheng", "eqCheng2", params, margin=margin,
                       verdict=_verdict(margin >= -tol),
                       details={"lambda_warp": lam_w, "lambda_model": lam_m,
                                "max_K_minus_c": excess})


def bishop_check(warp: WarpProfile, c: float, n: int, tol: float = 1e-8) -> CheckReport:
    """Bishop: ``f^{n-1} / S_c^{n-1}`` is nondecreasing and at least one.

    Nodes where the ratio is within ``tol`` of one are flagged as rigid; the
    rigidity probe then expects ``f`` to agree with ``S_c`` at every earlier
    node as well.
    """
    params = {"c": c, "n": n, "r": warp.r, "N": warp.N, "warp": warp.label, "tol": tol}
    if float(np.max(radial_curvature(warp) - c)) > HYPOTHESIS_TOL:
        return CheckReport("bishop", "eqRauch", params, margin=math.nan, verdict="SKIP",
                           status="hypothesis_violated")
    t = warp.t[1:]
    f, df = warp.f[1:], warp.df[1:]
    S, C = np.asarray(s_c(c, t)), np.asarray(c_c(c, t))
    ratio = f / S
    dratio = (df * S - f * C) / (S * S)
    d_density = (n - 1) * ratio ** (n - 2) * dratio
    growth = float(np.min(dratio))
    excess = float(np.min(f ** (n - 1) - S ** (n - 1)))
    rigid = np.abs(ratio - 1.0) <= tol
    consistent = True
    if rigid.any():
        last = int(np.flatnonzero(rigid)[-1])
        consistent = bool(np.all(np.abs(f[: last + 1] - S[: last + 1]) <= tol * np.maximum(S[: last + 1], 1.0)))
    ok = growth >= -tol and float(np.min(d_density)) >= -tol and excess >= -tol and consistent
    return CheckReport("bishop", "eqRauch", params, margin=min(growth, excess),
                       verdict=_verdict(ok),
                       details={"min_ratio_slope": growth, "min_density_excess": excess,
                                "rigid_nodes": int(rigid.sum()), "rigid_everywhere": bool(rigid.all()),
                                "rigidity_consistent": consistent})


def cheng_corpus(c: float, trials: int = 50, master_seed: int = 7, n: int = 2,
                 r: float | None = None, roughness: float = 0.5,
                 N: int = DEFAULT_N) -> list[tuple[CheckReport, CheckReport]]:
    """Seeded sweep of random warps; returns ``(cheng, bishop)`` per trial."""
    r = CORPUS_RADIUS.get(float(c), 1.0) if r is None else r
    out = []
    for k in range(trials):
        seed = trial_seed(master_seed, k)
        warp = random_warp(c, r, seed, roughness, N)
        ch, bi = cheng_compare(warp, c, n), bishop_check(warp, c, n)
        ch.seed = bi.seed = seed
        out.append((ch, bi))
    return out


# ------------------------------------------------------------ mu machinery


@dataclass(eq=False)
class MuProfile:
    c: int
    m: int
    lambda1: float
    t: np.ndarray
    mu: np.ndarray
    dmu: np.ndarray


def _check_normalized(c):
    if c not in (-1, 0, 1):
        raise InputError("c must be -1, 0 or 1; rescale first (see spaceform.rescale)")
    return int(c)


def mu_profile(c: int, m: int, lambda1: float, r: float, N: int = DEFAULT_N) -> MuProfile:
    """``mu = exp(-lam t^2 / 2m)`` for ``c = 0`` and ``C_c^{-lam/m}`` for ``c = +-1``."""
    c = _check_normalized(c)
    if c == 1 and r >= math.pi / 2:
        raise DomainError("c = 1 needs r < pi/2")
    t = np.linspace(0.0, r, N + 1)
    p = lambda1 / m
    if c == 0:
        mu = np.exp(-0.5 * p * t * t)
        dmu = -p * t * mu
    else:
        S, C = np.asarray(s_c(c, t)), np.asarray(c_c(c, t))
        mu = C ** (-p)
        # C' = -c S
        dmu = p * c * S * C ** (-p - 1.0)
    return MuProfile(c, m, lambda1, t, mu, dmu)


def bracket(c: int, m: int, lambda1: float, t):
    """Integrand factor of the weighted Wronskian identity.

    ``d/dt [S^{m-1} (v' mu - mu' v)] = -lam S^{m-1} bracket(t) mu v``.
    """
    c = _check_normalized(c)
    t = np.asarray(t, float)
    if c == 0:
        return lambda1 * t * t / (m * m)
    S, C = np.asarray(s_c(c, t)), np.asarray(c_c(c, t))
    tan2 = (S / C) ** 2
    if c == -1:
        # 1/m - 1/(m C^2) = S^2 / (m C^2): written this way it cannot cancel to zero
        return tan2 / m * (1.0 + lambda1 / m)
    return 2.0 - 1.0 / m + 1.0 / (m * C * C) + lambda1 / (m * m) * tan2


def _model_pair(c, m, r, N):
    ball = ModelBall(float(c), m, r)
    if validate_ball(ball, Context.SUBMANIFOLD):
        raise DomainError(validate_ball(ball, Context.SUBMANIFOLD))
    res = model_ball_lambda1(ball, N=N)
    return res, mu_profile(c, m, res.lambda1, r, N)


def wronskian_negativity(c: int, m: int, r: float, N: int = DEFAULT_N) -> CheckReport:
    """``W = v' mu - mu' v < 0`` and ``m (C/S) v' + lam v < 0`` at interior nodes.

    For ``c = 1`` the two are not equivalent (``mu' > 0`` there makes
    ``W < 0`` the weaker statement), so both are checked.
    """
    c = _check_normalized(c)
    res, mp = _model_pair(c, m, r, N)
    v, dv = res.v[1:-1], res.dv[1:-1]
    W = dv * mp.mu[1:-1] - mp.dmu[1:-1] * v
    t = res.t[1:-1]
    key = m * np.asarray(c_c(c, t)) / np.asarray(s_c(c, t)) * dv + res.lambda1 * v
    ok = bool(np.all(W < 0) and np.all(key < 0))
    return CheckReport("wronskian", "eqSubm4", {"c": c, "m": m, "r": r, "N": N},
                       margin=float(-max(W.max(), key.max())), verdict=_verdict(ok),
                       details={"lambda1": res.lambda1, "max_W": float(W.max()),
                                "max_key": float(key.max())})


def bracket_positivity(c: int, m: int, lambda1: float, r: float, N: int = DEFAULT_N) -> CheckReport:
    c = _check_normalized(c)
    t = np.linspace(0.0, r, N + 1)[1:-1]
    b = np.asarray(bracket(c, m, lambda1, t))
    lo = float(b.min())
    return CheckReport("bracket", "eqSubm4", {"c": c, "m": m, "lambda1": lambda1, "r": r, "N": N},
                       margin=lo, verdict=_verdict(lo > 0))


def mu_identity_defect(c: int, m: int, r: float, N: int = DEFAULT_N) -> float:
    """Max relative defect of the weighted Wronskian identity under central differences."""
    res, mp = _model_pair(c, m, r, N)
    t, h = res.t, res.t[1] - res.t[0]
    S = np.asarray(s_c(c, t)) if c != 0 else t
    lhs_fun = S ** (m - 1) * (res.dv * mp.mu - mp.dmu * res.v)
    lhs = (lhs_fun[2:] - lhs_fun[:-2]) / (2 * h)
    tt = t[1:-1]
    rhs = -res.lambda1 * S[1:-1] ** (m - 1) * bracket(c, m, res.lambda1, tt) * mp.mu[1:-1] * res.v[1:-1]
    return float(np.max(np.abs(lhs - rhs)) / np.max(np.abs(rhs)))


# ------------------------------------------------------------ catenoid


def catenoid_extent(r: float) -> float:
    """``U`` with ``cosh(U)^2 + U^2 = r^2``: the catenoid inside the ball of radius ``r``."""
    if not r > 1:
        raise DomainError("the catenoid meets the ball of radius r <= 1 in an empty set")
    from scipy.optimize import brentq

    return brentq(lambda u: math.cosh(u) ** 2 + u * u - r * r, 0.0, r, xtol=1e-15, rtol=1e-15)


def catenoid_lambda1_1d(r: float, N: int = DEFAULT_N) -> float:
    """Lowest rotationally symmetric Dirichlet mode of ``-v''/cosh(u)^2`` on ``(-U, U)``.

    Shooting from the neck with ``v(0) = 1, v'(0) = 0``; the mode is even in ``u``.
    """
    U = catenoid_extent(r)
    h = U / N
    uh = np.arange(2 * N + 1) * (0.5 * h)
    w = np.cosh(uh) ** 2
    a = np.zeros_like(uh)
    g = np.zeros_like(uh)
    y = np.zeros(N + 1)
    dy = np.zeros(N + 1)

    def has_zero(lam):
        return kernels.integrate_linear2(a, lam * w, g, h, 0, 1.0, 0.0, y, dy, True) != -1

    guess = (math.pi / (2 * U)) ** 2  # upper bound, since cosh >= 1
    lam, _, _ = bisect_first_eigenvalue(has_zero, guess, 1e-12 * max(guess, 1.0))
    return lam


def catenoid_lambda1_2d(r: float, N_u: int = 512, N_theta: int = 16):
    """Same eigenvalue on the full ``(u, theta)`` cylinder; returns ``(lam, theta_variation)``."""
    U = catenoid_extent(r)
    dom = build_cylinder_domain(-U, U, N_u, N_theta, lambda u: np.cosh(u) ** 2)
    lam, vec = smallest_eigenpair(dom)
    rings = vec.reshape(N_u + 1, N_theta)[1:-1]
    spread = float(np.max((rings.max(1) - rings.min(1)) / rings.max(1)))
    return lam, spread


@lru_cache(maxsize=None)
def flat_lambda1_unit(n: int) -> float:
    """``lambda_1`` of the flat unit ``n``-ball (``j_{n/2-1,1}^2``)."""
    return model_ball_lambda1(ModelBall(0.0, n, 1.0), tol=1e-12).lambda1


def submanifold_bound_check(r: float, N: int = DEFAULT_N, N_u: int = 512,
                            N_theta: int = 16, agree_tol: float = 1e-3) -> CheckReport:
    """The catenoid piece inside a ball of radius ``r`` beats the flat disk of radius ``r``."""
    lam1 = catenoid_lambda1_1d(r, N)
    lam2, spread = catenoid_lambda1_2d(r, N_u, N_theta)
    bound = flat_lambda1_unit(2) / (r * r)
    margin = lam1 - bound
    # relative above 1: thin bands have eigenvalues in the tens of thousands
    ok = margin > 0 and abs(lam1 - lam2) <= agree_tol * max(1.0, lam1)
    return CheckReport("catenoid", "eqSubm2",
                       {"r": r, "N": N, "N_u": N_u, "N_theta": N_theta, "U": catenoid_extent(r)},
                       margin=margin, verdict=_verdict(ok),
                       details={"lambda_1d": lam1, "lambda_2d": lam2, "bound": bound,
                                "discretization_gap": abs(lam1 - lam2),
                                "theta_variation": spread})


# ------------------------------------------------------------ stability


def catenoid_A2(s):
    """``|A|^2`` of the catenoid at meridian arclength ``s`` from the neck.

    With ``s = sinh(u)`` the principal curvatures are ``+-1/cosh(u)^2``.
    """
    s = np.asarray(s, float)
    return 2.0 / (1.0 + s * s) ** 2


@dataclass
class StabilityInput:
    n: int
    r: float
    supA2: float
    profile: Callable | None = None

    def __post_init__(self):
        if self.supA2 < 0:
            raise InputError("supA2 must be nonnegative")
        if int(self.n) != self.n or self.n < 2:
            raise InputError("n must be an integer >= 2")
        if not self.r > 0:
            raise InputError("r must be positive")


def stability_check(inp: StabilityInput, N: int = 1024) -> CheckReport:
    """``stable`` when ``sup |A|^2 <= lambda_1`` of the flat ``n``-ball of radius ``r``.

    With a sampled profile the smallest eigenvalue of ``-Delta - |A|^2`` on
    the flat ball is also computed; it must be positive whenever the
    criterion says ``stable``.
    """
    threshold = flat_lambda1_unit(inp.n) / (inp.r * inp.r)
    stable = inp.supA2 <= threshold
    details = {"threshold": threshold, "verdict_kind": "stable" if stable else "inconclusive"}
    ok = True
    if inp.profile is not None:
        dom = build_radial_domain(WarpProfile.model(0.0, inp.r, N), inp.n)
        q = np.asarray(inp.profile(dom.coords["t"]), float)
        if np.max(q) > inp.supA2 * (1 + 1e-12):
            raise InputError("profile exceeds supA2")
        mu, _ = smallest_eigenpair(dom, potential=q)
        details["stability_eigenvalue"] = mu
        if stable:
            ok = mu > 0
    return CheckReport("stability", "stability",
                       {"n": inp.n, "r": inp.r, "supA2": inp.supA2, "N": N},
                       margin=threshold - inp.supA2, verdict=_verdict(ok),
                       status=details["verdict_kind"], details=details)
