import math

import numpy as np
import pytest

from tonelab import oracles
from tonelab.acceptance import barta_domains
from tonelab.discrete_domain import build_interval_domain, build_polar_domain, grad_log
from tonelab.errors import InputError
from tonelab.radial_eigen import WarpProfile
from tonelab.tone_bounds import (
    barta_bounds,
    certificate,
    mckean_report,
    optimal_vfield,
    random_admissible_field,
    vfield_lower_bound,
)


def _quad(d):
    t = d.coords["t"]
    return np.where(d.interior, 1 - t**2, 0.0)


def test_barta_quadratic(disk256):
    rep = barta_bounds(disk256, _quad(disk256))
    assert rep.lower == pytest.approx(4.0, abs=1e-2)
    assert rep.upper > 100
    assert rep.passed


def test_barta_cap(disk256):
    rep = barta_bounds(disk256, _quad(disk256), cap=50.0)
    assert rep.upper == math.inf and rep.passed
    assert rep.to_dict()["margin_upper"] == math.inf


def test_barta_ground_equality(disk128):
    lam, u = disk128.ground()
    rep = barta_bounds(disk128, u)
    assert rep.lower == pytest.approx(lam, rel=1e-6)
    assert rep.upper == pytest.approx(lam, rel=1e-6)


@pytest.mark.parametrize("name", list(barta_domains()))
def test_barta_sandwich_random(name):
    d = barta_domains()[name]
    rng = np.random.default_rng(11)
    for _ in range(100):
        rep = barta_bounds(d, random_admissible_field(d, rng))
        assert rep.lower <= rep.lambda1 <= rep.upper


def test_barta_rejects_bad_fields(disk128):
    with pytest.raises(InputError):
        barta_bounds(disk128, -np.ones(disk128.n_nodes))
    with pytest.raises(InputError):
        barta_bounds(disk128, np.ones(disk128.n_nodes))


def test_vfield_zero(disk128):
    rep = vfield_lower_bound(disk128, np.zeros(disk128.edges.shape[0]))
    assert rep.lower == 0.0 and rep.passed


def test_vfield_equals_barta(disk256):
    f = _quad(disk256)
    v = vfield_lower_bound(disk256, -grad_log(disk256, f)).lower
    assert v == pytest.approx(4.0, abs=1e-2)
    assert abs(v - barta_bounds(disk256, f).lower) < 1e-10


@pytest.mark.parametrize("name", list(barta_domains()))
def test_vfield_identity_random(name):
    d = barta_domains()[name]
    rng = np.random.default_rng(5)
    for _ in range(10):
        f = random_admissible_field(d, rng)
        b = barta_bounds(d, f).lower
        v = vfield_lower_bound(d, -grad_log(d, f)).lower
        assert abs(v - b) <= 1e-10 * max(1.0, abs(b))


@pytest.mark.parametrize("name", list(barta_domains()))
def test_vfield_bound_random_fields(name):
    # any edge field gives a lower bound, not only logarithmic gradients
    d = barta_domains()[name]
    rng = np.random.default_rng(6)
    lam = d.ground()[0]
    for _ in range(20):
        X = rng.normal(0, 3, d.edges.shape[0])
        assert vfield_lower_bound(d, X).lower <= lam + 1e-9


def test_certificate_flat(disk256):
    rep = certificate(disk256)
    assert rep.lower == pytest.approx(rep.lambda1, abs=1e-6)
    vals = optimal_vfield(disk256)
    assert np.all(np.isfinite(vals[~np.isin(disk256.edges, np.flatnonzero(disk256.boundary)).any(1)]))


def test_certificate_hemisphere(hemisphere_cap):
    assert certificate(hemisphere_cap).lower == pytest.approx(2.0, abs=5e-2)


def test_certificate_interval(interval2048):
    assert certificate(interval2048).lower == pytest.approx(math.pi**2, abs=5e-2)


def test_certificate_gap_shrinks():
    gaps = []
    for N in (64, 128, 256):
        d = build_polar_domain(WarpProfile.model(0.0, 1.0, N), N_theta=32)
        gaps.append(abs(certificate(d).lower - oracles.DISK_LAMBDA1))
    # at least linear in h
    assert gaps[0] / gaps[1] >= 2 * 0.9 and gaps[1] / gaps[2] >= 2 * 0.9


def test_mckean():
    far = mckean_report(3, 50.0)
    assert far.passed and 1.0 < far.lambda1 < 1.004
    near = mckean_report(2, 1.0)
    assert near.lambda1 > 10 * 0.25
    with pytest.raises(InputError):
        mckean_report(1, 2.0)


def test_report_json_fields(disk128):
    d = barta_bounds(disk128, _quad(disk128)).to_dict()
    for key in ("source", "lower", "upper", "lambda1", "margin_lower", "margin_upper", "grid", "params",
                "verdict"):
        assert key in d
