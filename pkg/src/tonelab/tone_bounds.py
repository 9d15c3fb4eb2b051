"""Two-sided Barta bounds and the vector-field lower bound for lambda_1.

For a positive test function ``f`` vanishing on the boundary,

    inf (-L f / f) <= lambda_1 <= sup (-L f / f),

and for any vector field ``X``, ``inf (div X - |X|^2) <= lambda_1`` with
equality for ``X = -grad log v``, ``v`` the ground state. Both hold exactly
for the discrete operators of :mod:`tonelab.discrete_domain`, which is what
the reports check against the domain's computed eigenvalue.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .discrete_domain import DiscreteDomain, div_minus_sq, grad_log, laplacian
from .errors import InputError
from .radial_eigen import model_ball_lambda1
from .spaceform import ModelBall

DEFAULT_CAP = 1e8


@dataclass
class BoundReport:
    source: str
    lower: float
    upper: float
    lambda1: float
    theorem: str
    params: dict = field(default_factory=dict)
    grid: dict = field(default_factory=dict)
    slack: float = 0.0

    @property
    def margin_lower(self) -> float:
        return self.lambda1 - self.lower

    @property
    def margin_upper(self) -> float:
        return self.upper - self.lambda1

    @property
    def passed(self) -> bool:
        ok = self.lower <= self.lambda1 + self.slack
        if math.isfinite(self.upper):
            ok = ok and self.lambda1 <= self.upper + self.slack
        return bool(ok)

    @property
    def verdict(self) -> str:
        return "PASS" if self.passed else "FAIL"

    def to_dict(self) -> dict:
        d = asdict(self)
        d.update(margin_lower=self.margin_lower, margin_upper=self.margin_upper,
                 verdict=self.verdict)
        return d


def _lambda(domain, lambda1):
    return domain.ground()[0] if lambda1 is None else float(lambda1)


def barta_quotient(domain: DiscreteDomain, f) -> np.ndarray:
    """``-L f / f`` at interior nodes (NaN elsewhere)."""
    f = np.asarray(f, float)
    if f.shape != (domain.n_nodes,):
        raise InputError("test function has wrong length")
    if np.any(f[domain.interior] <= 0):
        raise InputError("Barta test function must be positive at interior nodes")
    q = np.full(domain.n_nodes, np.nan)
    q[domain.interior] = -laplacian(domain, f)[domain.interior] / f[domain.interior]
    return q


def barta_bounds(domain: DiscreteDomain, f, lambda1: float | None = None,
                 cap: float = DEFAULT_CAP) -> BoundReport:
    """Barta's sandwich for the test function ``f`` (zero at boundary nodes)."""
    f = np.asarray(f, float)
    if np.any(f[domain.boundary] != 0):
        raise InputError("Barta test function must vanish on the boundary")
    q = barta_quotient(domain, f)[domain.interior]
    lam = _lambda(domain, lambda1)
    upper = float(q.max())
    return BoundReport(
        source="Barta",
        lower=float(q.min()),
        upper=upper if upper <= cap else math.inf,
        lambda1=lam,
        theorem="eqBarta1",
        grid=dict(domain.params),
        params={"cap": cap},
        slack=1e-9 * max(lam, 1.0),
    )


def vfield_lower_bound(domain: DiscreteDomain, X, lambda1: float | None = None,
                       layer: int = 0) -> BoundReport:
    """``min (div X - |X|^2)`` over interior nodes deeper than ``layer`` cells."""
    X = np.asarray(X, float)
    if X.shape != (domain.edges.shape[0],):
        raise InputError("vector field must have one value per edge")
    if np.any(np.isnan(X)):
        raise InputError("vector field has NaN entries")
    vals = div_minus_sq(domain, X)[domain.layer_mask(layer)]
    lam = _lambda(domain, lambda1)
    return BoundReport(
        source="VectorField",
        lower=float(np.min(vals)),
        upper=math.inf,
        lambda1=lam,
        theorem="eqThmP1",
        grid=dict(domain.params),
        params={"layer": layer},
        slack=1e-9 * max(lam, 1.0),
    )


def optimal_vfield(domain: DiscreteDomain) -> np.ndarray:
    """``X0 = -grad log v`` for the ground state ``v`` of ``domain``."""
    _, v = domain.ground()
    return -grad_log(domain, v)


def certificate(domain: DiscreteDomain, layer: int = 1) -> BoundReport:
    """Equality certificate: the vector-field bound evaluated at ``X0``."""
    rep = vfield_lower_bound(domain, optimal_vfield(domain), layer=layer)
    rep.theorem = "eqThmP2"
    return rep


def mckean_report(n: int, r: float, tol: float = 1e-10, N: int = 4096) -> BoundReport:
    """First eigenvalue of the hyperbolic ``n``-ball against ``(n-1)^2/4``."""
    if n < 2:
        raise InputError("n must be >= 2")
    lam = model_ball_lambda1(ModelBall(-1.0, n, r), tol=tol, N=N).lambda1
    asym = (n - 1) ** 2 / 4.0
    rep = BoundReport(
        source="McKean",
        lower=asym,
        upper=math.inf,
        lambda1=lam,
        theorem="McKean",
        params={"n": n, "r": r},
        grid={"N": N},
    )
    # strict inequality at finite radius
    rep.slack = -1e-12
    return rep


def random_admissible_field(domain: DiscreteDomain, rng: np.random.Generator) -> np.ndarray:
    """Random positive field vanishing exactly at the boundary nodes.

    A smooth bump ``sin(pi/2 * depth/max depth)`` raised to a random power,
    times ``exp`` of a few random cosines in the coordinates, and for half
    the draws times independent per-node noise in ``[0.5, 1.5]``.
    """
    depth = domain.depth.astype(float)
    bump = np.sin(0.5 * math.pi * depth / depth.max())
    f = bump ** rng.uniform(0.5, 2.0)
    g = np.zeros(domain.n_nodes)
    for x in domain.coords.values():
        span = float(np.ptp(x)) or 1.0
        for _ in range(3):
            g += rng.normal(0.0, 0.4) * np.cos(rng.uniform(0, 6) * x / span + rng.uniform(0, 2 * math.pi))
    f = f * np.exp(g)
    if rng.random() < 0.5:
        f = f * rng.uniform(0.5, 1.5, domain.n_nodes)
    f[domain.boundary] = 0.0
    return f
