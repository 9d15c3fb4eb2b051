import json
import math

import numpy as np
import pytest

from tonelab import oracles
from tonelab import quasilinear as ql
from tonelab.errors import DomainError, InputError


@pytest.fixture(scope="module")
def lam(disk256):
    return disk256.ground()[0]


@pytest.mark.parametrize("k", [0.0, 0.5, 0.9])
def test_solve_below_lambda(disk256, lam, k):
    prob = ql.EllipticProblem(disk256, F=k * lam, psi=0.0)
    assert ql.solvability_gate(prob) is ql.Gate.SOLVABLE
    sol = ql.solve_dirichlet(prob)
    assert sol.residual < 1e-4
    assert sol.min_f > 0
    assert np.max(np.abs(sol.u[disk256.boundary])) < 1e-12


def test_trivial_problem_exact(disk128):
    sol = ql.solve_dirichlet(ql.EllipticProblem(disk128, F=0.0, psi=0.0))
    assert sol.residual == 0.0
    assert np.all(sol.u == 0.0)


@pytest.mark.parametrize("k,gate", [(1.1, ql.Gate.NO_SOLUTION), (0.999, ql.Gate.SOLVABLE),
                                    (1.0, ql.Gate.INDETERMINATE)])
def test_gate(disk128, k, gate):
    lam = disk128.ground()[0]
    assert ql.solvability_gate(ql.EllipticProblem(disk128, F=k * lam)) is gate


def test_gate_plus_half(disk256, lam):
    assert ql.solvability_gate(ql.EllipticProblem(disk256, F=lam + 0.5)) is ql.Gate.NO_SOLUTION


def test_gate_mixed_F_indeterminate(disk128):
    lam = disk128.ground()[0]
    F = lambda co: np.where(co["t"] < 0.5, 2 * lam, 0.0)
    assert ql.solvability_gate(ql.EllipticProblem(disk128, F=F)) is ql.Gate.INDETERMINATE


def test_refuses_without_gate(disk128):
    lam = disk128.ground()[0]
    with pytest.raises(DomainError):
        ql.solve_dirichlet(ql.EllipticProblem(disk128, F=1.1 * lam))


def test_gate_soundness_sweep(disk128):
    """A positive linear solution exists exactly when the gate says Solvable (constant F)."""
    lam = disk128.ground()[0]
    for k in np.linspace(0.1, 2.0, 20):
        prob = ql.EllipticProblem(disk128, F=k * oracles.DISK_LAMBDA1)
        gate = ql.solvability_gate(prob)
        try:
            ql.solve_dirichlet(prob, force=True)
            positive = True
        except Exception:
            positive = False
        if gate is ql.Gate.SOLVABLE:
            assert positive
        if gate is ql.Gate.NO_SOLUTION:
            assert not positive
        assert (k * oracles.DISK_LAMBDA1 < lam) == (gate is ql.Gate.SOLVABLE)


def test_coercivity(disk256, lam):
    prob = ql.EllipticProblem(disk256, F=0.9 * lam)
    assert ql.coercivity(prob) == pytest.approx(0.1 * lam, rel=1e-8)


def test_blowup(disk256, lam):
    sol = ql.blowup_solution(disk256)
    assert sol.residual < 1e-2
    assert abs(lam - oracles.DISK_LAMBDA1) + sol.residual < 1e-2
    assert np.all(np.isinf(sol.u[disk256.boundary]))


def test_blowup_interval_matches_analytic(interval2048):
    sol = ql.blowup_solution(interval2048)
    x = interval2048.coords["x"]
    inner = (x > 0.05) & (x < 0.95)
    exact = -np.log(np.sin(math.pi * x[inner]))
    assert np.max(np.abs(sol.u[inner] - exact)) < 1e-4


def test_nonconstant_boundary(disk128):
    psi = 0.3 * np.cos(disk128.coords["theta"])
    prob = ql.EllipticProblem(disk128, F=1.0, psi=psi)
    sol = ql.solve_dirichlet(prob)
    assert np.max(np.abs(sol.u[disk128.boundary] - psi[disk128.boundary])) < 1e-14
    assert sol.residual < 1e-6


def test_centered_scheme_is_diagnostic(disk256, lam):
    prob = ql.EllipticProblem(disk256, F=0.9 * lam)
    sol = ql.solve_dirichlet(prob)
    exp_res = ql.residual(prob, sol.u)
    cen_res = ql.residual(prob, sol.u, scheme="centered")
    assert exp_res < 1e-6 < cen_res
    with pytest.raises(InputError):
        ql.residual(prob, sol.u, scheme="upwind")


def test_bad_inputs(disk128):
    with pytest.raises(InputError):
        ql.EllipticProblem(disk128, psi="infinite")
    with pytest.raises(InputError):
        ql.EllipticProblem(disk128, psi=math.inf)
    with pytest.raises(InputError):
        ql.solve_dirichlet(ql.EllipticProblem(disk128, psi=ql.BLOW_UP))


def test_load_problem_forms(tmp_path):
    doc = {"domain": {"kind": "polar", "c": 0.0, "r": 1.0, "N": 64, "N_theta": 16},
           "F": {"lambda1_multiple": 0.5}, "psi": {"cos_theta": 0.2}}
    p1 = ql.load_problem(doc)
    p2 = ql.load_problem(json.dumps(doc))
    path = tmp_path / "p.json"
    path.write_text(json.dumps(doc))
    p3 = ql.load_problem(str(path))
    for p in (p2, p3):
        assert np.array_equal(p.F_nodes, p1.F_nodes)
        assert np.array_equal(p.psi_b, p1.psi_b)
    assert p1.F_nodes[0] == pytest.approx(0.5 * p1.domain.ground()[0])
    interval = ql.load_problem({"domain": {"kind": "interval", "N": 256}, "psi": "blow_up"})
    assert interval.blow_up
    with pytest.raises(InputError):
        ql.load_problem({"domain": {"kind": "torus"}})


def test_field_csv(disk128):
    prob = ql.EllipticProblem(disk128, F=1.0)
    text = ql.field_csv(prob, ql.solve_dirichlet(prob))
    lines = text.splitlines()
    assert lines[0] == "t,theta,u,f,F"
    assert len(lines) == disk128.n_nodes + 1


def test_closed_form_log_quadratic(disk256):
    # exp(-u) = 1 - t^2 has -Delta(1 - t^2) = 4, so F = 4 / (1 - t^2)
    t = disk256.coords["t"]
    with np.errstate(divide="ignore"):
        u = -np.log(1 - t**2)
        F = np.where(disk256.interior, 4 / (1 - t**2), 0.0)
    prob = ql.EllipticProblem(disk256, F=F, psi=ql.BLOW_UP)
    assert ql.residual(prob, u) < 1e-2


def test_lambda_minus_one(disk256, lam):
    sol = ql.solve_dirichlet(ql.EllipticProblem(disk256, F=lam - 1.0))
    assert sol.residual < 1e-4


def test_interval_blowup_vs_pi_squared(interval2048):
    sol = ql.blowup_solution(interval2048)
    assert sol.residual + abs(sol.lambda1 - math.pi**2) < 1e-3


@pytest.mark.parametrize("k", [0.0, 0.3, 0.6, 0.95])
def test_formulations_agree(disk128, k):
    lam = disk128.ground()[0]
    sol = ql.solve_dirichlet(ql.EllipticProblem(disk128, F=k * lam, psi=0.2))
    assert sol.linear_residual < 1e-8 and sol.residual < 1e-6
