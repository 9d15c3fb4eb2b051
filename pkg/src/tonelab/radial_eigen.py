"""Shooting solver for the first Dirichlet eigenvalue of rotationally symmetric balls.

For the metric ``dt^2 + f(t)^2 dxi^2`` on an ``n``-ball the radial part of
the Laplacian is ``v'' + (n-1)(f'/f) v'``. The first Dirichlet eigenvalue is
the smallest ``lam`` for which the solution of

    v'' + (n-1)(f'/f) v' + lam v = 0,   v(0) = 1,  v'(0) = 0

vanishes at ``t = r``. By Sturm oscillation, ``lam < lambda_1`` exactly when
``v > 0`` on ``(0, r]``, which gives a monotone bisection predicate.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import kernels
from .errors import ConvergenceError, DomainError, InputError
from .spaceform import Context, ModelBall, c_c, s_c, validate_ball

DEFAULT_N = 4096
MAX_DOUBLINGS = 200
MAX_BISECTIONS = 200


def _hermite_mid(f, df, d2f, h):
    """Quintic Hermite value and slope at the midpoints of consecutive nodes."""
    f0, f1 = f[:-1], f[1:]
    d0, d1 = df[:-1], df[1:]
    s0, s1 = d2f[:-1], d2f[1:]
    val = 0.5 * (f0 + f1) + 5.0 * h / 32.0 * (d0 - d1) + h * h / 64.0 * (s0 + s1)
    slope = 15.0 / (8.0 * h) * (f1 - f0) - 7.0 / 16.0 * (d0 + d1) + h / 32.0 * (s1 - s0)
    return val, slope


def _interleave(nodes, mids):
    out = np.empty(2 * nodes.size - 1)
    out[0::2] = nodes
    out[1::2] = mids
    return out


@dataclass(eq=False)
class WarpProfile:
    """Samples of a warping function ``f`` on ``t_i = i r / N``, ``i = 0..N``.

    ``funcs`` optionally holds exact callables ``(f, f')``; when present they
    are used for off-grid values instead of Hermite interpolation.
    """

    r: float
    f: np.ndarray
    df: np.ndarray
    d2f: np.ndarray
    funcs: tuple[Callable, Callable] | None = field(default=None, repr=False)
    label: str = "warp"

    def __post_init__(self):
        self.f = np.ascontiguousarray(self.f, dtype=float)
        self.df = np.ascontiguousarray(self.df, dtype=float)
        self.d2f = np.ascontiguousarray(self.d2f, dtype=float)
        if not (self.f.shape == self.df.shape == self.d2f.shape) or self.f.ndim != 1:
            raise InputError("f, df, d2f must be 1-D arrays of equal length")
        if self.f.size < 3:
            raise InputError("a warp needs at least 3 samples")
        if not self.r > 0:
            raise InputError(f"radius must be positive, got {self.r}")
        if abs(self.f[0]) > 1e-10 or abs(self.df[0] - 1.0) > 1e-10:
            raise InputError("warp must satisfy f(0) = 0 and f'(0) = 1")
        if np.any(self.f[1:] <= 0):
            k = int(np.argmax(self.f[1:] <= 0)) + 1
            raise InputError(f"warp is not positive at t = {k * self.h:g}")
        if not (np.all(np.isfinite(self.f)) and np.all(np.isfinite(self.df))
                and np.all(np.isfinite(self.d2f))):
            raise InputError("warp samples must be finite")

    @property
    def N(self) -> int:
        return self.f.size - 1

    @property
    def h(self) -> float:
        return self.r / self.N

    @property
    def t(self) -> np.ndarray:
        return np.arange(self.N + 1) * self.h

    @classmethod
    def from_functions(cls, f, df, d2f, r, N=DEFAULT_N, label="warp"):
        t = np.arange(N + 1) * (r / N)
        return cls(r, f(t), df(t), d2f(t), funcs=(f, df), label=label)

    @classmethod
    def model(cls, c: float, r: float, N: int = DEFAULT_N) -> "WarpProfile":
        """Sampled ``S_c``: the warping function of the space form of curvature ``c``."""
        if c > 0 and r > math.pi / math.sqrt(c):
            raise DomainError("r exceeds pi/sqrt(c)")
        return cls.from_functions(
            lambda t: s_c(c, t),
            lambda t: c_c(c, t),
            lambda t: -c * np.asarray(s_c(c, t)),
            r,
            N,
            label=f"S_{c:g}",
        )

    def half_grid(self) -> tuple[np.ndarray, np.ndarray]:
        """``(f, f')`` on the half-step grid (length ``2N + 1``)."""
        h = self.h
        if self.funcs is not None:
            tm = (np.arange(self.N) + 0.5) * h
            fm = np.asarray(self.funcs[0](tm), dtype=float)
            dfm = np.asarray(self.funcs[1](tm), dtype=float)
        else:
            fm, dfm = _hermite_mid(self.f, self.df, self.d2f, h)
        return _interleave(self.f, fm), _interleave(self.df, dfm)

    def origin_jet(self) -> tuple[float, float]:
        """Estimates of ``f''(0)`` and ``f'''(0)``."""
        d = self.d2f
        f3 = (-3.0 * d[0] + 4.0 * d[1] - d[2]) / (2.0 * self.h)
        return float(d[0]), float(f3)


def radial_curvature(warp: WarpProfile) -> np.ndarray:
    """Radial sectional curvature ``K = -f''/f`` at the grid nodes.

    The value at ``t = 0`` is linearly extrapolated from the first two
    interior nodes.
    """
    K = np.empty_like(warp.f)
    K[1:] = -warp.d2f[1:] / warp.f[1:]
    K[0] = 2.0 * K[1] - K[2]
    return K


@dataclass(eq=False)
class RadialEigenResult:
    lambda1: float
    t: np.ndarray
    v: np.ndarray
    dv: np.ndarray
    residual: float
    iterations: int
    bracket: tuple[float, float]
    n: int
    monotone: bool = True

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write("t,v,dv\n")
        for row in zip(self.t, self.v, self.dv):
            buf.write("%.17g,%.17g,%.17g\n" % row)
        return buf.getvalue()


@dataclass(eq=False)
class RadialCoefficients:
    """Half-grid ODE coefficients ``a = (n-1) f'/f`` and origin jet of ``f``."""

    a: np.ndarray
    h: float
    n: int
    f2: float = 0.0
    f3: float = 0.0
    a_nodes: np.ndarray = None

    @classmethod
    def from_warp(cls, warp: WarpProfile, n: int) -> "RadialCoefficients":
        if int(n) != n or n < 2:
            raise InputError(f"dimension must be an integer >= 2, got {n}")
        fh, dfh = warp.half_grid()
        a = np.zeros_like(fh)
        a[1:] = (n - 1) * dfh[1:] / fh[1:]
        f2, f3 = warp.origin_jet()
        return cls(np.ascontiguousarray(a), warp.h, int(n), f2, f3, a[0::2].copy())

    @property
    def N(self) -> int:
        return (self.a.size - 1) // 2

    def series_start(self, lam: float) -> tuple[float, float]:
        """Frobenius series for ``v(h), v'(h)``, accurate to ``O(h^5)`` / ``O(h^4)``."""
        n, h = self.n, self.h
        alpha, kappa = self.f2 / 2.0, self.f3 / 6.0
        a2 = -lam / (2.0 * n)
        a3 = -2.0 * (n - 1) * alpha * a2 / (3.0 * (n + 1))
        a4 = -(3.0 * (n - 1) * alpha * a3
               + 2.0 * (n - 1) * (2.0 * kappa - alpha * alpha) * a2
               + lam * a2) / (4.0 * (n + 2))
        v = 1.0 + h * h * (a2 + h * (a3 + h * a4))
        dv = h * (2.0 * a2 + h * (3.0 * a3 + 4.0 * h * a4))
        return v, dv


def integrate_radial(coeffs: RadialCoefficients, lam: float, stop_on_zero: bool = False):
    """Integrate the radial eigen-ODE at fixed ``lam``.

    Returns ``(v, dv, code)`` where ``v[-1]`` is ``v(r)``; ``code`` follows
    :mod:`tonelab._pykernels`.
    """
    if lam < 0:
        raise InputError("lambda must be nonnegative")
    N = coeffs.N
    v = np.zeros(N + 1)
    dv = np.zeros(N + 1)
    v[0], dv[0] = 1.0, 0.0
    y0, z0 = coeffs.series_start(lam)
    b = np.full(coeffs.a.size, float(lam))
    g = np.zeros(coeffs.a.size)
    code = kernels.integrate_linear2(coeffs.a, b, g, coeffs.h, 1, y0, z0, v, dv, stop_on_zero)
    if code == -2:
        raise ConvergenceError("|v| exceeded 1e12 during integration", lam=lam)
    return v, dv, code


def bisect_first_eigenvalue(has_zero: Callable[[float], bool], guess: float,
                            tol: float, rel_floor: float = 1e-14):
    """Bisection on a Sturm predicate ``has_zero(lam)`` (False below the eigenvalue).

    Returns ``(lam, (lo, hi), iterations)``.
    """
    lo, hi = 0.0, max(guess, 1e-12)
    it = 0
    while not has_zero(hi):
        lo, hi = hi, 2.0 * hi
        it += 1
        if it > MAX_DOUBLINGS:
            raise ConvergenceError("no sign change while doubling the bracket", bracket=(lo, hi))
    while hi - lo > rel_floor * hi:
        if it >= MAX_DOUBLINGS + MAX_BISECTIONS:
            break
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if has_zero(mid):
            hi = mid
        else:
            lo = mid
        it += 1
    if hi - lo > tol:
        raise ConvergenceError("bisection bracket wider than tolerance",
                               bracket=(lo, hi), iterations=it)
    return 0.5 * (lo + hi), (lo, hi), it


def _solve(coeffs: RadialCoefficients, r: float, tol: float, guess: float) -> RadialEigenResult:
    def has_zero(lam):
        return integrate_radial(coeffs, lam, stop_on_zero=True)[2] != -1

    lam, bracket, it = bisect_first_eigenvalue(has_zero, guess, tol)
    v, dv, _ = integrate_radial(coeffs, lam)
    N, h = coeffs.N, coeffs.h
    if np.any(v[:-1] <= 0):
        raise ConvergenceError("eigenfunction changes sign before r: higher mode captured",
                               lam=lam, bracket=bracket)
    d1 = (v[2:] - v[:-2]) / (2 * h)
    d2 = (v[2:] - 2 * v[1:-1] + v[:-2]) / (h * h)
    defect = d2 + coeffs.a_nodes[1:-1] * d1 + lam * v[1:-1]
    t = np.arange(N + 1) * h
    return RadialEigenResult(
        lambda1=lam,
        t=t,
        v=v,
        dv=dv,
        residual=float(np.max(np.abs(defect))),
        iterations=it,
        bracket=bracket,
        n=coeffs.n,
        monotone=bool(np.all(dv[1:] < 0)),
    )


def _guess(n, r):
    return n * n / (r * r)


def model_ball_lambda1(ball: ModelBall, tol: float = 1e-8, N: int = DEFAULT_N) -> RadialEigenResult:
    """First Dirichlet eigenvalue of a space-form ball by shooting.

    >>> round(model_ball_lambda1(ModelBall(0.0, 2, 1.0)).lambda1, 6)
    5.783186
    """
    problem = validate_ball(ball, Context.CHENG)
    if problem:
        raise DomainError(problem)
    if tol <= 0:
        raise InputError("tol must be positive")
    warp = WarpProfile.model(ball.c, ball.r, N)
    coeffs = RadialCoefficients.from_warp(warp, ball.n)
    coeffs.f2, coeffs.f3 = 0.0, -float(ball.c)
    return _solve(coeffs, ball.r, tol, _guess(ball.n, ball.r))


def warped_ball_lambda1(warp: WarpProfile, n: int, tol: float = 1e-8) -> RadialEigenResult:
    """First Dirichlet eigenvalue of the ``n``-ball with metric ``dt^2 + f^2 dxi^2``."""
    if tol <= 0:
        raise InputError("tol must be positive")
    coeffs = RadialCoefficients.from_warp(warp, n)
    return _solve(coeffs, warp.r, tol, _guess(n, warp.r))
