"""Finite-volume Laplacians on radial, interval, polar and cylinder grids.

Every domain is a weighted graph: node volumes ``V_i`` and edges ``(i, j)``
carrying a conductance ``kappa`` (dual face measure over edge length) and a
metric length ``ell``. With these,

    (L u)_i    = (1/V_i) sum_j kappa_ij (u_j - u_i)
    (grad u)_e = (u_j - u_i) / ell_e                   (edge field)
    (div X)_i  = (1/V_i) sum_j kappa_ij ell_ij X_{i->j}

so ``L = div grad`` and ``div = -grad^*`` between the node inner product
``sum V u v`` and the edge inner product ``sum kappa ell^2 X Y``. The
operator is symmetric in the volume-weighted inner product and ``-L`` is
positive semidefinite on fields vanishing at boundary nodes.

Vector fields are edge arrays: radial edges carry the ``d/dt`` component and
angular edges the ``f^{-1} d/dtheta`` component of the orthonormal frame.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import splu

from .errors import ConvergenceError, InputError
from .radial_eigen import WarpProfile

RADIAL, ANGULAR = 0, 1


@dataclass(eq=False)
class DiscreteDomain:
    kind: str
    coords: dict
    volume: np.ndarray
    interior: np.ndarray
    edges: np.ndarray
    conductance: np.ndarray
    length: np.ndarray
    edge_kind: np.ndarray
    params: dict = field(default_factory=dict)
    # distance (in cells) of each node from the boundary; used for layer exclusion
    depth: np.ndarray = None
    _cache: dict = field(default_factory=dict, repr=False)

    @property
    def n_nodes(self) -> int:
        return self.volume.size

    @property
    def boundary(self) -> np.ndarray:
        return ~self.interior

    @property
    def stiffness(self) -> sp.csr_matrix:
        """Symmetric graph Laplacian ``K`` with ``-L = V^{-1} K``."""
        if "K" not in self._cache:
            i, j = self.edges[:, 0], self.edges[:, 1]
            k = self.conductance
            n = self.n_nodes
            off = sp.coo_matrix((np.concatenate([-k, -k]), (np.concatenate([i, j]),
                                                             np.concatenate([j, i]))),
                                shape=(n, n))
            diag = np.bincount(i, k, n) + np.bincount(j, k, n)
            self._cache["K"] = (off + sp.diags(diag)).tocsr()
        return self._cache["K"]

    def _interior_block(self):
        if "KII" not in self._cache:
            idx = np.flatnonzero(self.interior)
            K = self.stiffness
            self._cache["KII"] = K[idx][:, idx].tocsc()
            self._cache["KIB"] = K[idx][:, np.flatnonzero(self.boundary)].tocsc()
        return self._cache["KII"], self._cache["KIB"]

    def ground(self, tol: float = 1e-8):
        """Cached smallest Dirichlet eigenpair ``(lam, u)``."""
        if "ground" not in self._cache:
            self._cache["ground"] = smallest_eigenpair(self, tol)
        return self._cache["ground"]

    def layer_mask(self, layer: int = 0) -> np.ndarray:
        """Interior nodes more than ``layer`` cells away from the boundary."""
        return self.interior & (self.depth > layer)

    def to_csv(self, **fields: np.ndarray) -> str:
        names = list(self.coords) + list(fields)
        cols = [self.coords[k] for k in self.coords] + [np.asarray(v) for v in fields.values()]
        buf = io.StringIO()
        buf.write(",".join(names) + "\n")
        for row in zip(*cols):
            buf.write(",".join("%.17g" % x for x in row) + "\n")
        return buf.getvalue()


def _edge_arrays(edges, kappa, ell, kinds):
    return (np.ascontiguousarray(np.array(edges, dtype=np.int64).reshape(-1, 2)),
            np.asarray(kappa, dtype=float), np.asarray(ell, dtype=float),
            np.asarray(kinds, dtype=np.int8))


def build_radial_domain(warp: WarpProfile, n: int, N: int | None = None) -> DiscreteDomain:
    """Radial part of the Laplacian of the ``n``-ball with metric ``dt^2 + f^2 dxi^2``.

    Dirichlet at ``t = r``, symmetry (zero flux) at ``t = 0``. Volumes and
    conductances drop the constant area of the unit ``(n-1)``-sphere.
    """
    if N is not None and N != warp.N:
        if warp.funcs is None:
            raise InputError("cannot resample a warp without exact functions")
        warp = WarpProfile.from_functions(warp.funcs[0], warp.funcs[1],
                                          lambda t: np.zeros_like(t), warp.r, N)
    N = warp.N
    if N < 16:
        raise InputError("radial domain needs N >= 16")
    if int(n) != n or n < 2:
        raise InputError("dimension must be an integer >= 2")
    h = warp.h
    fh, _ = warp.half_grid()
    w_mid = fh[1::2] ** (n - 1)
    vol = h * warp.f ** (n - 1)
    vol[0] = 0.5 * h * w_mid[0] / n
    i = np.arange(N)
    edges, kappa, ell, kinds = _edge_arrays(np.stack([i, i + 1], 1), w_mid / h,
                                            np.full(N, h), np.zeros(N))
    interior = np.ones(N + 1, bool)
    interior[N] = False
    return DiscreteDomain(
        kind="radial",
        coords={"t": warp.t},
        volume=vol,
        interior=interior,
        edges=edges,
        conductance=kappa,
        length=ell,
        edge_kind=kinds,
        params={"kind": "radial", "n": int(n), "r": warp.r, "N": N, "warp": warp.label},
        depth=(N - np.arange(N + 1)),
    )


def build_interval_domain(a: float, b: float, N: int,
                          weight: Callable | None = None,
                          stiffness: Callable | None = None) -> DiscreteDomain:
    """``(p u')' / w`` on ``[a, b]`` with Dirichlet data at both ends."""
    if N < 16:
        raise InputError("interval domain needs N >= 16")
    if not b > a:
        raise InputError("interval must have b > a")
    h = (b - a) / N
    x = a + np.arange(N + 1) * h
    xm = a + (np.arange(N) + 0.5) * h
    w = np.ones(N + 1) if weight is None else np.asarray(weight(x), float)
    p = np.ones(N) if stiffness is None else np.asarray(stiffness(xm), float)
    i = np.arange(N)
    edges, kappa, ell, kinds = _edge_arrays(np.stack([i, i + 1], 1), p / h,
                                            np.full(N, h), np.zeros(N))
    interior = np.ones(N + 1, bool)
    interior[[0, N]] = False
    k = np.arange(N + 1)
    return DiscreteDomain(
        kind="interval",
        coords={"x": x},
        volume=h * w,
        interior=interior,
        edges=edges,
        conductance=kappa,
        length=ell,
        edge_kind=kinds,
        params={"kind": "interval", "a": a, "b": b, "N": N},
        depth=np.minimum(k, N - k),
    )


def build_polar_domain(warp: WarpProfile, N_t: int | None = None, N_theta: int = 64) -> DiscreteDomain:
    """Two-dimensional ball with metric ``dt^2 + f(t)^2 dtheta^2``.

    Node 0 is the pole; ring ``i`` (``1..N_t``) holds ``N_theta`` nodes at
    ``t_i``. The outer ring carries Dirichlet data. The pole is coupled to
    every node of the first ring through the face ``t = h/2``.
    """
    if N_t is not None and N_t != warp.N:
        if warp.funcs is None:
            raise InputError("cannot resample a warp without exact functions")
        warp = WarpProfile.from_functions(warp.funcs[0], warp.funcs[1],
                                          lambda t: np.zeros_like(t), warp.r, N_t)
    N_t = warp.N
    if N_theta < 8:
        raise InputError("polar domain needs N_theta >= 8")
    if N_t < 4:
        raise InputError("polar domain needs N_t >= 4")
    h = warp.h
    dth = 2 * math.pi / N_theta
    fh, _ = warp.half_grid()
    f_mid = fh[1::2]
    f_node = warp.f

    n_nodes = 1 + N_t * N_theta
    ring = np.concatenate([[0], np.repeat(np.arange(1, N_t + 1), N_theta)])
    jth = np.concatenate([[0], np.tile(np.arange(N_theta), N_t)])
    t = ring * h
    theta = jth * dth

    vol = np.empty(n_nodes)
    vol[0] = 2 * math.pi * 0.5 * h * f_mid[0] / 2
    vol[1:] = h * dth * f_node[ring[1:]]

    def node(i, j):
        return 1 + (i - 1) * N_theta + (j % N_theta)

    jj = np.arange(N_theta)
    e_list, k_list, l_list, kind_list = [], [], [], []
    # pole to first ring
    e_list.append(np.stack([np.zeros(N_theta, int), node(1, jj)], 1))
    k_list.append(np.full(N_theta, f_mid[0] * dth / h))
    l_list.append(np.full(N_theta, h))
    kind_list.append(np.full(N_theta, RADIAL))
    for i in range(1, N_t):
        e_list.append(np.stack([node(i, jj), node(i + 1, jj)], 1))
        k_list.append(np.full(N_theta, f_mid[i] * dth / h))
        l_list.append(np.full(N_theta, h))
        kind_list.append(np.full(N_theta, RADIAL))
    for i in range(1, N_t):
        e_list.append(np.stack([node(i, jj), node(i, jj + 1)], 1))
        k_list.append(np.full(N_theta, h / (f_node[i] * dth)))
        l_list.append(np.full(N_theta, f_node[i] * dth))
        kind_list.append(np.full(N_theta, ANGULAR))
    edges, kappa, ell, kinds = _edge_arrays(np.concatenate(e_list), np.concatenate(k_list),
                                            np.concatenate(l_list), np.concatenate(kind_list))
    interior = ring < N_t
    return DiscreteDomain(
        kind="polar",
        coords={"t": t, "theta": theta},
        volume=vol,
        interior=interior,
        edges=edges,
        conductance=kappa,
        length=ell,
        edge_kind=kinds,
        params={"kind": "polar", "r": warp.r, "N_t": N_t, "N_theta": N_theta, "warp": warp.label},
        depth=N_t - ring,
    )


def build_cylinder_domain(a: float, b: float, N_u: int, N_theta: int,
                          factor: Callable) -> DiscreteDomain:
    """Annulus ``[a, b] x S^1`` with conformal metric ``factor(u) (du^2 + dtheta^2)``.

    Dirichlet at ``u = a`` and ``u = b``. In two dimensions conductances are
    conformally invariant, so only volumes and edge lengths see the factor.
    """
    if N_theta < 8:
        raise InputError("cylinder domain needs N_theta >= 8")
    if N_u < 4:
        raise InputError("cylinder domain needs N_u >= 4")
    du = (b - a) / N_u
    dth = 2 * math.pi / N_theta
    u = a + np.arange(N_u + 1) * du
    um = a + (np.arange(N_u) + 0.5) * du
    rho = np.asarray(factor(u), float)
    rho_m = np.asarray(factor(um), float)

    def node(i, j):
        return i * N_theta + (j % N_theta)

    jj = np.arange(N_theta)
    e_list, k_list, l_list, kind_list = [], [], [], []
    for i in range(N_u):
        e_list.append(np.stack([node(i, jj), node(i + 1, jj)], 1))
        k_list.append(np.full(N_theta, dth / du))
        l_list.append(np.full(N_theta, math.sqrt(rho_m[i]) * du))
        kind_list.append(np.full(N_theta, RADIAL))
    for i in range(1, N_u):
        e_list.append(np.stack([node(i, jj), node(i, jj + 1)], 1))
        k_list.append(np.full(N_theta, du / dth))
        l_list.append(np.full(N_theta, math.sqrt(rho[i]) * dth))
        kind_list.append(np.full(N_theta, ANGULAR))
    edges, kappa, ell, kinds = _edge_arrays(np.concatenate(e_list), np.concatenate(k_list),
                                            np.concatenate(l_list), np.concatenate(kind_list))
    ii = np.repeat(np.arange(N_u + 1), N_theta)
    return DiscreteDomain(
        kind="cylinder",
        coords={"u": u[ii], "theta": np.tile(jj * dth, N_u + 1)},
        volume=du * dth * rho[ii],
        interior=(ii > 0) & (ii < N_u),
        edges=edges,
        conductance=kappa,
        length=ell,
        edge_kind=kinds,
        params={"kind": "cylinder", "a": a, "b": b, "N_u": N_u, "N_theta": N_theta},
        depth=np.minimum(ii, N_u - ii),
    )


# ---------------------------------------------------------------- operators


def laplacian(domain: DiscreteDomain, u) -> np.ndarray:
    """``L u`` at every node (rows of boundary nodes are not meaningful)."""
    return -(domain.stiffness @ np.asarray(u, float)) / domain.volume


def grad(domain: DiscreteDomain, u) -> np.ndarray:
    u = np.asarray(u, float)
    i, j = domain.edges[:, 0], domain.edges[:, 1]
    return (u[j] - u[i]) / domain.length


def div(domain: DiscreteDomain, X) -> np.ndarray:
    X = np.asarray(X, float)
    if X.shape != (domain.edges.shape[0],):
        raise InputError("vector field must have one value per edge")
    i, j = domain.edges[:, 0], domain.edges[:, 1]
    flux = domain.conductance * domain.length * X
    n = domain.n_nodes
    return (np.bincount(i, flux, n) - np.bincount(j, flux, n)) / domain.volume


def grad_log(domain: DiscreteDomain, u) -> np.ndarray:
    """Edge gradient of ``log u``, in the form ``(u_j - u_i) / (ell sqrt(u_i u_j))``.

    This equals ``(2/ell) sinh(d log u / 2)``, a second-order approximation
    of ``grad log u`` for which :func:`div_minus_sq` of ``-grad_log(u)`` is
    exactly ``-L u / u``. Edges touching a zero (boundary) value give
    ``-inf``/``+inf``.
    """
    u = np.asarray(u, float)
    i, j = domain.edges[:, 0], domain.edges[:, 1]
    if np.any(u[domain.interior] <= 0):
        raise InputError("grad_log needs a field positive at interior nodes")
    if np.any(u < 0):
        raise InputError("grad_log needs a nonnegative field")
    with np.errstate(divide="ignore", invalid="ignore"):
        return (u[j] - u[i]) / (domain.length * np.sqrt(u[i] * u[j]))


def _split(z):
    """Node share ``1/(1 + z + sqrt(1+z^2))`` and ``w = sqrt(1+z^2) - z`` (stable)."""
    z = np.asarray(z, float)
    s = np.hypot(1.0, z)
    with np.errstate(invalid="ignore", divide="ignore"):
        w = np.where(z >= 0, 1.0 / (z + s), s - z)
    return w


def node_norm2(domain: DiscreteDomain, X) -> np.ndarray:
    """Nodal ``|X|^2`` from an edge field.

    Each edge contributes ``kappa ell^2 X^2 / V`` to its endpoints, split
    with weights ``1/(1 + z + sqrt(1 + z^2))``, ``z = ell X_{i->j} / 2``, which
    sum to one over the two endpoints and tend to 1/2 as ``h -> 0``.
    """
    X = np.asarray(X, float)
    i, j = domain.edges[:, 0], domain.edges[:, 1]
    z = 0.5 * domain.length * X
    s = np.hypot(1.0, z)
    with np.errstate(invalid="ignore"):
        share_i = 1.0 / (1.0 + z + s)
        share_j = 1.0 / (1.0 - z + s)
    e = domain.conductance * domain.length ** 2 * X ** 2
    n = domain.n_nodes
    return (np.bincount(i, e * share_i, n) + np.bincount(j, e * share_j, n)) / domain.volume


def div_minus_sq(domain: DiscreteDomain, X) -> np.ndarray:
    """``div X - |X|^2`` at the nodes, assembled edge by edge.

    Per edge and endpoint the combination reduces to ``kappa (1 - w^2)``
    with ``w = sqrt(1 + z^2) - z``, which stays finite when ``X = +inf`` on
    an edge into a boundary node. For every edge field and every ``phi``
    vanishing on the boundary, ``sum V phi^2 (div X - |X|^2) <= sum kappa
    (d phi)^2``, so the minimum over nodes bounds the discrete first
    eigenvalue from below.
    """
    X = np.asarray(X, float)
    i, j = domain.edges[:, 0], domain.edges[:, 1]
    z = 0.5 * domain.length * X
    w_i = _split(z)
    w_j = _split(-z)
    k = domain.conductance
    n = domain.n_nodes
    with np.errstate(invalid="ignore", over="ignore"):
        c_i = k * (1.0 - w_i * w_i)
        c_j = k * (1.0 - w_j * w_j)
    return (np.bincount(i, c_i, n) + np.bincount(j, c_j, n)) / domain.volume


def rayleigh_quotient(domain: DiscreteDomain, u) -> float:
    """``sum kappa (du)^2 / sum V u^2``; ``u`` must vanish at boundary nodes."""
    u = np.asarray(u, float)
    if u.shape != (domain.n_nodes,):
        raise InputError("field has wrong length")
    if np.any(u[domain.boundary] != 0):
        raise InputError("test field must vanish on the boundary")
    den = float(np.sum(domain.volume * u * u))
    if den == 0:
        raise InputError("zero field has no Rayleigh quotient")
    i, j = domain.edges[:, 0], domain.edges[:, 1]
    return float(np.sum(domain.conductance * (u[j] - u[i]) ** 2)) / den


def smallest_eigenpair(domain: DiscreteDomain, tol: float = 1e-8, potential=None,
                       max_iter: int = 500):
    """Smallest Dirichlet eigenpair of ``-L - potential`` by shifted inverse iteration.

    Returns ``(lam, u)`` with ``u`` a full-length nodal field, zero on the
    boundary and positive inside, normalized to ``max u = 1``.
    """
    KII, _ = domain._interior_block()
    idx = np.flatnonzero(domain.interior)
    V = domain.volume[idx]
    q = np.zeros(idx.size) if potential is None else np.broadcast_to(
        np.asarray(potential, float), (domain.n_nodes,))[idx]
    # below the spectrum: -L - q >= -max q
    shift = -float(np.max(q)) - 1.0 if potential is not None else 0.0
    A = (KII - sp.diags(V * (q + shift))).tocsc()
    lu = splu(A)
    x = np.sqrt(V)  # positive start vector
    x = x / math.sqrt(np.sum(V * x * x))
    lam = math.inf
    res = math.inf
    for it in range(max_iter):
        y = lu.solve(V * x)
        y /= math.sqrt(np.sum(V * y * y))
        Ky = KII @ y - V * q * y
        lam = float(y @ Ky)
        res = float(np.sqrt(np.sum((Ky - lam * V * y) ** 2 / V)))
        x = y
        if res <= tol * max(abs(lam), 1.0):
            break
    else:
        raise ConvergenceError("inverse iteration did not converge", lam=lam, residual=res,
                               iterations=max_iter)
    u = np.zeros(domain.n_nodes)
    u[idx] = x
    if u[idx].sum() < 0:
        u = -u
    u /= u.max()
    return lam, u


def solve_dirichlet_linear(domain: DiscreteDomain, rhs, boundary_values, potential=None):
    """Solve ``-L w - potential * w = rhs`` inside, ``w = boundary_values`` on the boundary."""
    KII, KIB = domain._interior_block()
    idx = np.flatnonzero(domain.interior)
    bidx = np.flatnonzero(domain.boundary)
    V = domain.volume[idx]
    q = np.zeros(idx.size) if potential is None else np.broadcast_to(
        np.asarray(potential, float), (domain.n_nodes,))[idx]
    g = np.broadcast_to(np.asarray(boundary_values, float), (bidx.size,))
    b = V * np.broadcast_to(np.asarray(rhs, float), (domain.n_nodes,))[idx] - KIB @ g
    A = (KII - sp.diags(V * q)).tocsc()
    w = np.zeros(domain.n_nodes)
    w[idx] = splu(A).solve(b)
    w[bidx] = g
    return w
