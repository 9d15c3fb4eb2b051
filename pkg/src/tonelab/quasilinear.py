"""Dirichlet problems for ``Delta u - |grad u|^2 = F``.

Writing ``f = exp(-u)`` turns the equation into the linear one
``-Delta f - F f = 0``. The solver works with the linear problem and maps
back. When ``sup F < lambda_1`` the operator ``-Delta - F`` is coercive and
the solution exists; when ``inf F >= lambda_1`` there is none. Anything in
between is reported as indeterminate.

The default residual uses the exponentially fitted operator

    Q(u)_i = (1/V_i) sum_j kappa_ij (1 - exp(-(u_j - u_i))) = -L(e^{-u}) / e^{-u},

a consistent discretization of ``Delta u - |grad u|^2`` that is exact under
the substitution and stays finite when ``u = +inf`` on the boundary.
``scheme="centered"`` evaluates ``L u - |grad u|^2`` with plain centered
differences instead; its truncation error is ``O(h^2 |grad u|^4)``, which
is large wherever ``f`` is small.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .discrete_domain import (
    DiscreteDomain,
    build_interval_domain,
    build_polar_domain,
    build_radial_domain,
    grad,
    laplacian,
    smallest_eigenpair,
    solve_dirichlet_linear,
)
from .errors import DomainError, InputError, PositivityFailure
from .radial_eigen import WarpProfile

BLOW_UP = "blow_up"


class Gate(str, enum.Enum):
    SOLVABLE = "Solvable"
    NO_SOLUTION = "NoSolutionCertificate"
    INDETERMINATE = "Indeterminate"


@dataclass(eq=False)
class EllipticProblem:
    """``F`` is a constant or nodal array, or else a callable of the coordinate dict.

    ``psi`` is a constant, an array (boundary-node or full nodal length) or
    :data:`BLOW_UP`.
    """

    domain: DiscreteDomain
    F: object = 0.0
    psi: object = 0.0
    F_nodes: np.ndarray = field(init=False, repr=False)
    psi_b: np.ndarray | None = field(init=False, repr=False)

    def __post_init__(self):
        d = self.domain
        F = self.F(d.coords) if callable(self.F) else self.F
        F = np.broadcast_to(np.asarray(F, float), (d.n_nodes,)).copy()
        if not np.all(np.isfinite(F[d.interior])):
            raise InputError("F must be finite at interior nodes")
        self.F_nodes = F
        if isinstance(self.psi, str):
            if self.psi != BLOW_UP:
                raise InputError(f"psi must be numeric or {BLOW_UP!r}")
            self.psi_b = None
            return
        nb = int(d.boundary.sum())
        psi = np.asarray(self.psi, float)
        if psi.ndim == 1 and psi.size == d.n_nodes:
            psi = psi[d.boundary]
        psi = np.broadcast_to(psi, (nb,)).copy()
        if not np.all(np.isfinite(psi)):
            raise InputError("psi must be finite (use 'blow_up' for the infinite case)")
        self.psi_b = psi

    @property
    def blow_up(self) -> bool:
        return self.psi_b is None


@dataclass(eq=False)
class QLSolution:
    u: np.ndarray
    f: np.ndarray
    residual: float
    linear_residual: float
    status: str
    lambda1: float
    min_f: float
    params: dict = field(default_factory=dict)

    def summary(self) -> dict:
        return {
            "status": self.status,
            "residual": self.residual,
            "linear_residual": self.linear_residual,
            "lambda1": self.lambda1,
            "min_f": self.min_f,
            "params": self.params,
        }


def solvability_gate(problem: EllipticProblem, tol: float = 1e-8) -> Gate:
    lam = problem.domain.ground()[0]
    Fi = problem.F_nodes[problem.domain.interior]
    if Fi.max() < lam - tol:
        return Gate.SOLVABLE
    if Fi.min() >= lam + tol:
        return Gate.NO_SOLUTION
    return Gate.INDETERMINATE


def exp_operator(domain: DiscreteDomain, u) -> np.ndarray:
    """``Q(u) = sum kappa (1 - exp(-(u_j - u_i))) / V``; allows ``u = +inf`` at boundary nodes."""
    u = np.asarray(u, float)
    i, j = domain.edges[:, 0], domain.edges[:, 1]
    k = domain.conductance
    with np.errstate(invalid="ignore", over="ignore"):
        c_i = k * -np.expm1(-(u[j] - u[i]))
        c_j = k * -np.expm1(-(u[i] - u[j]))
    n = domain.n_nodes
    return (np.bincount(i, c_i, n) + np.bincount(j, c_j, n)) / domain.volume


def centered_operator(domain: DiscreteDomain, u) -> np.ndarray:
    """``L u - |grad u|^2`` with each edge's squared gradient split evenly between its ends."""
    u = np.asarray(u, float)
    g = grad(domain, u)
    i, j = domain.edges[:, 0], domain.edges[:, 1]
    e = 0.5 * domain.conductance * domain.length ** 2 * g * g
    n = domain.n_nodes
    sq = (np.bincount(i, e, n) + np.bincount(j, e, n)) / domain.volume
    return laplacian(domain, u) - sq


def residual(problem: EllipticProblem, u, scheme: str = "exponential", layer: int = 0) -> float:
    """Max over interior nodes deeper than ``layer`` of ``|Delta_h u - |grad_h u|^2 - F|``."""
    d = problem.domain
    u = np.asarray(u, float)
    mask = d.layer_mask(layer)
    if not np.all(np.isfinite(u[mask])):
        raise InputError("u must be finite at the nodes where the residual is taken")
    if scheme == "exponential":
        q = exp_operator(d, u)
    elif scheme == "centered":
        if not np.all(np.isfinite(u)):
            raise InputError("the centered scheme needs finite u everywhere")
        q = centered_operator(d, u)
    else:
        raise InputError(f"unknown scheme {scheme!r}")
    return float(np.max(np.abs(q[mask] - problem.F_nodes[mask])))


def _linear_defect(problem, f):
    d = problem.domain
    r = -laplacian(d, f) - problem.F_nodes * f
    scale = max(1.0, float(np.max(np.abs(f))))
    return float(np.max(np.abs(r[d.interior]))) / scale


def solve_dirichlet(problem: EllipticProblem, tol: float = 1e-8, force: bool = False) -> QLSolution:
    """Solve with finite boundary data through ``f = v + h``.

    ``v`` is the discrete harmonic extension of ``exp(-psi)`` and ``h``
    solves ``(-L - F) h = F v`` with zero boundary data, so ``(-L - F) f = 0``.
    Refuses unless the gate says Solvable, or ``force`` is set; raises
    :class:`PositivityFailure` if ``f`` is not positive.
    """
    if problem.blow_up:
        raise InputError("blow-up boundary data: use blowup_solution")
    d = problem.domain
    lam = d.ground()[0]
    gate = solvability_gate(problem, tol)
    if gate is not Gate.SOLVABLE and not force:
        raise DomainError(f"solvability gate returned {gate.value}; pass force=True to attempt anyway")
    g = np.exp(-problem.psi_b)
    # constants are harmonic; splitting off the mean keeps constant data exact
    gm = float(g.mean())
    v = gm + solve_dirichlet_linear(d, 0.0, g - gm)
    h = solve_dirichlet_linear(d, problem.F_nodes * v, 0.0, potential=problem.F_nodes)
    f = v + h
    min_f = float(f.min())
    if not np.all(np.isfinite(f)) or min_f <= 0:
        raise PositivityFailure(f"linear solution is not positive (min f = {min_f:.3e})", min_f=min_f)
    u = -np.log(f)
    return QLSolution(
        u=u,
        f=f,
        residual=residual(problem, u),
        linear_residual=_linear_defect(problem, f),
        status="solved" if gate is Gate.SOLVABLE else f"solved (gate: {gate.value})",
        lambda1=lam,
        min_f=min_f,
        params=dict(d.params),
    )


def blowup_solution(domain: DiscreteDomain, layer: int = 1) -> QLSolution:
    """``u = -log(phi_1)``: solves the equation with ``F = lambda_1`` and ``u = +inf`` on the boundary."""
    lam, phi = domain.ground()
    with np.errstate(divide="ignore"):
        u = -np.log(phi)
    prob = EllipticProblem(domain, F=lam, psi=BLOW_UP)
    return QLSolution(
        u=u,
        f=phi,
        residual=residual(prob, u, layer=layer),
        linear_residual=_linear_defect(prob, phi),
        status="blow_up",
        lambda1=lam,
        min_f=float(phi[domain.interior].min()),
        params=dict(domain.params, layer=layer),
    )


def coercivity(problem: EllipticProblem) -> float:
    """Smallest eigenvalue of ``-L - F``."""
    return smallest_eigenpair(problem.domain, potential=problem.F_nodes)[0]


# ------------------------------------------------------------ JSON input


def domain_from_dict(desc: dict) -> DiscreteDomain:
    kind = desc.get("kind", "polar")
    if kind == "interval":
        return build_interval_domain(float(desc.get("a", 0.0)), float(desc.get("b", 1.0)),
                                     int(desc.get("N", 2048)))
    c = float(desc.get("c", 0.0))
    r = float(desc.get("r", 1.0))
    N = int(desc.get("N", 256))
    warp = WarpProfile.model(c, r, N)
    if kind == "polar":
        return build_polar_domain(warp, N_theta=int(desc.get("N_theta", 64)))
    if kind == "radial":
        return build_radial_domain(warp, int(desc.get("n", 2)))
    raise InputError(f"unknown domain kind {kind!r}")


def load_problem(source) -> EllipticProblem:
    """Build a problem from a JSON document (a path or JSON string; dicts pass through).

    ``{"domain": {...}, "F": 1.0 | [..] | {"lambda1_multiple": 0.5}, "psi": 0.0 | [..] | "blow_up"}``
    """
    if isinstance(source, dict):
        doc = source
    elif str(source).lstrip().startswith("{"):
        doc = json.loads(str(source))
    else:
        doc = json.loads(Path(source).read_text())
    domain = domain_from_dict(doc.get("domain", {}))
    F = doc.get("F", 0.0)
    if isinstance(F, dict):
        if "lambda1_multiple" not in F:
            raise InputError("F object must have key 'lambda1_multiple'")
        F = float(F["lambda1_multiple"]) * domain.ground()[0]
    psi = doc.get("psi", 0.0)
    if isinstance(psi, dict) and "cos_theta" in psi:
        # psi = a cos(theta) on polar boundaries
        psi = float(psi["cos_theta"]) * np.cos(domain.coords["theta"])
    return EllipticProblem(domain, F=F, psi=psi)


def field_csv(problem: EllipticProblem, sol: QLSolution) -> str:
    return problem.domain.to_csv(u=sol.u, f=sol.f, F=problem.F_nodes)

