import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from tonelab import comparison_suite as cs
from tonelab.errors import DomainError, InputError
from tonelab.radial_eigen import WarpProfile, radial_curvature
from tonelab.spaceform import c_c, s_c


def _warp(r, f, df, d2f, N=2048, label="test"):
    t = np.linspace(0.0, r, N + 1)
    return WarpProfile(r, f(t), df(t), d2f(t), label=label)


# ------------------------------------------------------------ warp corpus


@pytest.mark.parametrize("c", [-1.0, 0.0, 1.0])
def test_random_warp_roughness_zero_is_model(c):
    r = cs.CORPUS_RADIUS[c]
    w = cs.random_warp(c, r, seed=3, roughness=0.0)
    assert np.max(np.abs(w.f - np.asarray(s_c(c, w.t)))) < 1e-14
    assert np.max(np.abs(w.df - np.asarray(c_c(c, w.t)))) < 1e-14


@settings(max_examples=15, deadline=None)
@given(c=st.sampled_from([-1.0, 0.0, 1.0]), seed=st.integers(0, 2**32 - 1),
       roughness=st.floats(0.0, 2.0))
def test_random_warp_curvature_bound(c, seed, roughness):
    w = cs.random_warp(c, cs.CORPUS_RADIUS[c], seed, roughness, N=1024)
    assert np.all(w.f[1:] > 0)
    assert np.max(radial_curvature(w)) <= c + 1e-8


def test_random_warp_deterministic():
    a = cs.random_warp(0.0, 1.0, 99, 0.5)
    b = cs.random_warp(0.0, 1.0, 99, 0.5)
    assert np.array_equal(a.f, b.f)
    with pytest.raises(DomainError):
        cs.random_warp(1.0, 4.0, 1, 0.5)
    with pytest.raises(InputError):
        cs.random_warp(0.0, 1.0, 1, -0.1)


@pytest.mark.parametrize("c", [-1.0, 0.0, 1.0])
def test_cheng_equality_at_zero_roughness(c):
    rep = cs.cheng_compare(cs.random_warp(c, cs.CORPUS_RADIUS[c], 0, 0.0), c, 2)
    assert rep.passed and abs(rep.margin) <= 1e-8


def test_cheng_seed_42():
    w = cs.random_warp(0.0, 1.0, 42, 0.5)
    rep = cs.cheng_compare(w, 0.0, 2)
    assert rep.passed and rep.margin > 0
    assert rep.details["lambda_model"] == pytest.approx(5.783186, abs=1e-5)


def test_cheng_hypothesis_violated():
    # sin has curvature +1, above the model c = 0
    w = _warp(1.0, np.sin, np.cos, lambda t: -np.sin(t))
    rep = cs.cheng_compare(w, 0.0, 2)
    assert rep.status == "hypothesis_violated" and rep.verdict == "SKIP"
    assert cs.bishop_check(w, 0.0, 2).status == "hypothesis_violated"


@pytest.mark.parametrize("c", [0.0, 1.0])
def test_bishop_cubic_perturbation(c):
    S = lambda t: np.asarray(s_c(c, t))
    C = lambda t: np.asarray(c_c(c, t))
    w = _warp(1.0, lambda t: S(t) + t**3, lambda t: C(t) + 3 * t**2, lambda t: -c * S(t) + 6 * t)
    rep = cs.bishop_check(w, c, 3)
    assert rep.passed and rep.details["min_ratio_slope"] >= 0
    assert not rep.details["rigid_everywhere"]


def test_bishop_rigid_model():
    rep = cs.bishop_check(cs.random_warp(-1.0, 2.0, 0, 0.0), -1.0, 2)
    assert rep.passed and rep.details["rigid_everywhere"]


def test_corpus_small():
    pairs = cs.cheng_corpus(1.0, trials=5, master_seed=11)
    assert len(pairs) == 5
    assert len({ch.seed for ch, _ in pairs}) == 5
    assert all(ch.passed and bi.passed for ch, bi in pairs)


# ------------------------------------------------------------ mu machinery


def test_mu_examples():
    p = cs.mu_profile(-1, 2, 3.0, 1.0, N=8)
    assert p.mu[-1] == pytest.approx(math.cosh(1.0) ** -1.5, rel=1e-14)
    p0 = cs.mu_profile(0, 2, 4.0, 1.0, N=8)
    assert p0.mu[-1] == pytest.approx(math.exp(-1.0), rel=1e-14)
    p1 = cs.mu_profile(1, 2, 3.0, 1.2, N=64)
    assert np.all(np.diff(p1.mu) > 0)
    with pytest.raises(InputError):
        cs.mu_profile(2, 2, 1.0, 0.5)
    with pytest.raises(DomainError):
        cs.mu_profile(1, 2, 1.0, 2.0)


@pytest.mark.parametrize("c", [-1, 0, 1])
def test_mu_derivative(c):
    p = cs.mu_profile(c, 3, 5.0, 1.0, N=4000)
    fd = np.gradient(p.mu, p.t, edge_order=2)
    assert np.max(np.abs(fd - p.dmu)) < 1e-5


def test_bracket_values():
    lam, m = 3.0, 2
    t = 0.7
    assert float(cs.bracket(0, m, lam, t)) == pytest.approx(lam * t * t / m**2)
    th = math.tanh(t) ** 2
    assert float(cs.bracket(-1, m, lam, t)) == pytest.approx(th / m * (1 + lam / m), rel=1e-13)
    expect = 2 - 1 / m + 1 / (m * math.cos(t) ** 2) + lam / m**2 * math.tan(t) ** 2
    assert float(cs.bracket(1, m, lam, t)) == pytest.approx(expect, rel=1e-14)


def test_bracket_minus_one_small_t():
    # the naive 1/m - 1/(m C^2) form cancels to zero here
    assert float(cs.bracket(-1, 2, 1.0, 1e-9)) > 0


@pytest.mark.parametrize("c,m,r", [(-1, 2, 0.3), (-1, 4, 5.0), (0, 3, 1.2), (1, 2, 1.2), (1, 4, 0.7)])
def test_wronskian_cases(c, m, r):
    w = cs.wronskian_negativity(c, m, r)
    assert w.passed and w.details["max_W"] < 0 and w.details["max_key"] < 0
    assert cs.bracket_positivity(c, m, w.details["lambda1"], r).passed


def test_wronskian_rejects_large_spherical_radius():
    with pytest.raises(DomainError):
        cs.wronskian_negativity(1, 2, 1.6)


@pytest.mark.parametrize("c", [-1, 0, 1])
def test_identity_defect_second_order(c):
    d1 = cs.mu_identity_defect(c, 3, 1.0, N=512)
    d2 = cs.mu_identity_defect(c, 3, 1.0, N=1024)
    assert d1 < 1e-3
    assert d1 / d2 == pytest.approx(4.0, rel=0.1)


# ------------------------------------------------------------ catenoid


def test_catenoid_extent():
    U = cs.catenoid_extent(1.5)
    assert math.cosh(U) ** 2 + U * U == pytest.approx(2.25, abs=1e-12)
    for r in (1.0, 0.5):
        with pytest.raises(DomainError):
            cs.catenoid_extent(r)


@pytest.mark.parametrize("r", [1.2, 1.5, 2.0])
def test_catenoid_bound(r):
    rep = cs.submanifold_bound_check(r)
    assert rep.passed and rep.margin > 0
    assert rep.details["discretization_gap"] <= 1e-3
    assert rep.details["theta_variation"] < 1e-6


def test_catenoid_thin_band():
    # U ~ 0.01, so lambda is close to (pi / 2U)^2 since cosh ~ 1
    r = 1.0001
    lam = cs.catenoid_lambda1_1d(r)
    U = cs.catenoid_extent(r)
    assert lam == pytest.approx((math.pi / (2 * U)) ** 2, rel=1e-3)


def test_catenoid_A2():
    assert float(cs.catenoid_A2(0.0)) == 2.0
    assert float(cs.catenoid_A2(1.0)) == 0.5


# ------------------------------------------------------------ stability


def test_stability_examples():
    s = cs.stability_check(cs.StabilityInput(2, 1.5, 2.0, cs.catenoid_A2))
    assert s.status == "stable" and s.passed and s.details["stability_eigenvalue"] > 0
    assert cs.stability_check(cs.StabilityInput(2, 1.71, 2.0)).status == "inconclusive"
    assert cs.stability_check(cs.StabilityInput(2, 1.75, 2.0)).status == "inconclusive"
    for bad in [(2, 1.0, -1.0), (1, 1.0, 1.0), (2, 0.0, 1.0)]:
        with pytest.raises(InputError):
            cs.StabilityInput(*bad)


@settings(max_examples=20, deadline=None)
@given(n=st.integers(2, 5), r=st.floats(0.2, 5.0), A=st.floats(0.0, 50.0), s=st.floats(0.25, 4.0))
def test_stability_rescaling(n, r, A, s):
    a = cs.stability_check(cs.StabilityInput(n, r, A))
    b = cs.stability_check(cs.StabilityInput(n, r * s, A / (s * s)))
    if abs(a.margin) > 1e-9 * max(1.0, A):
        assert a.status == b.status
    assert b.margin * s * s == pytest.approx(a.margin, rel=1e-9, abs=1e-9)
