import math

import numpy as np
import pytest

from tonelab import oracles
from tonelab.discrete_domain import (
    build_cylinder_domain,
    build_interval_domain,
    build_polar_domain,
    build_radial_domain,
    div,
    grad,
    grad_log,
    laplacian,
    rayleigh_quotient,
    smallest_eigenpair,
)
from tonelab.errors import InputError
from tonelab.radial_eigen import WarpProfile, model_ball_lambda1
from tonelab.spaceform import ModelBall


def _domains():
    yield "radial", build_radial_domain(WarpProfile.model(-1.0, 2.0, 128), 3)
    yield "interval", build_interval_domain(0.0, 1.0, 128)
    yield "polar", build_polar_domain(WarpProfile.model(0.0, 1.0, 32), N_theta=16)
    yield "cylinder", build_cylinder_domain(-1.0, 1.0, 32, 16, lambda u: np.cosh(u) ** 2)


DOMAINS = dict(_domains())


def _inner(d, u, v):
    return float(np.sum(d.volume * u * v))


@pytest.mark.parametrize("name", list(DOMAINS))
def test_symmetry_and_sbp(name):
    d = DOMAINS[name]
    rng = np.random.default_rng(1)
    for _ in range(100):
        u, v = rng.normal(size=(2, d.n_nodes))
        u[d.boundary] = v[d.boundary] = 0
        lhs = _inner(d, laplacian(d, u), v)
        assert abs(lhs - _inner(d, u, laplacian(d, v))) < 1e-10 * max(1.0, abs(lhs))
        X = rng.normal(size=d.edges.shape[0])
        edge_ip = float(np.sum(d.conductance * d.length**2 * grad(d, u) * X))
        assert abs(_inner(d, u, div(d, X)) + edge_ip) < 1e-10 * max(1.0, abs(edge_ip))


@pytest.mark.parametrize("name", list(DOMAINS))
def test_constants(name):
    d = DOMAINS[name]
    one = np.ones(d.n_nodes)
    assert np.max(np.abs(laplacian(d, one)[d.interior])) < 1e-9
    assert np.all(grad(d, one) == 0)


@pytest.mark.parametrize("name", list(DOMAINS))
def test_negative_laplacian_psd(name):
    d = DOMAINS[name]
    rng = np.random.default_rng(2)
    u = rng.normal(size=d.n_nodes)
    u[d.boundary] = 0
    assert -_inner(d, laplacian(d, u), u) > 0


def test_radial_flat_disk():
    lam, u = smallest_eigenpair(build_radial_domain(WarpProfile.model(0.0, 1.0, 1024), 2))
    assert lam == pytest.approx(5.7832, abs=5e-3)
    assert abs(lam - oracles.DISK_LAMBDA1) < 1e-5


def test_radial_hemisphere():
    lam, _ = smallest_eigenpair(build_radial_domain(WarpProfile.model(1.0, math.pi / 2, 512), 2))
    assert lam == pytest.approx(2.0, abs=5e-3)


def test_polar_matches_radial(disk256):
    lam_p, u = disk256.ground()
    lam_r, _ = smallest_eigenpair(build_radial_domain(WarpProfile.model(0.0, 1.0, 256), 2))
    assert abs(lam_p - lam_r) < 1e-3
    rings = u[1:].reshape(256, 64)[:-1]
    assert np.max((rings.max(1) - rings.min(1)) / rings.max(1)) < 1e-6
    assert lam_p == pytest.approx(5.7832, abs=5e-3)


def test_interval_sine(interval2048):
    lam, u = interval2048.ground()
    assert lam == pytest.approx(math.pi**2, abs=1e-3)
    x = interval2048.coords["x"]
    assert np.max(np.abs(u - np.sin(math.pi * x))) < 1e-5


def test_eigenpair_properties(disk128):
    lam, u = disk128.ground()
    assert u.max() == 1.0
    assert np.all(u[disk128.interior] > 0)
    assert np.all(u[disk128.boundary] == 0)
    assert rayleigh_quotient(disk128, u) == pytest.approx(lam, rel=1e-12)
    idx = disk128.interior
    r = (-laplacian(disk128, u) - lam * u)[idx]
    assert np.sqrt(np.sum(disk128.volume[idx] * r * r) / np.sum(disk128.volume[idx] * u[idx] ** 2)) < 1e-8 * lam


def test_rayleigh_quadratic(disk256):
    t = disk256.coords["t"]
    u = np.where(disk256.interior, 1 - t**2, 0.0)
    assert rayleigh_quotient(disk256, u) == pytest.approx(6.0, abs=1e-2)


def test_rayleigh_variational(disk128):
    lam = disk128.ground()[0]
    rng = np.random.default_rng(3)
    for _ in range(20):
        u = rng.random(disk128.n_nodes)
        u[disk128.boundary] = 0
        assert rayleigh_quotient(disk128, u) >= lam - 1e-8
    with pytest.raises(InputError):
        rayleigh_quotient(disk128, np.zeros(disk128.n_nodes))
    with pytest.raises(InputError):
        rayleigh_quotient(disk128, np.ones(disk128.n_nodes))


def test_div_of_grad_quadratic(disk256):
    t = disk256.coords["t"]
    d = div(disk256, grad(disk256, t**2 / 2))
    inner = disk256.interior
    assert np.max(np.abs(d[inner] - 2.0)) < 1e-3


def test_grad_log_requires_positive(disk128):
    with pytest.raises(InputError):
        grad_log(disk128, -np.ones(disk128.n_nodes))


def test_convergence_order():
    exact = model_ball_lambda1(ModelBall(-1.0, 3, 2.0)).lambda1
    errs = [abs(smallest_eigenpair(build_radial_domain(WarpProfile.model(-1.0, 2.0, N), 3))[0] - exact)
            for N in (128, 256, 512)]
    assert errs[0] / errs[1] >= 3.5 and errs[1] / errs[2] >= 3.5


@pytest.mark.parametrize("bad", [lambda: build_radial_domain(WarpProfile.model(0.0, 1.0, 8), 2),
                                 lambda: build_polar_domain(WarpProfile.model(0.0, 1.0, 32), N_theta=4)])
def test_size_guards(bad):
    with pytest.raises(InputError):
        bad()


def test_csv(disk128):
    text = disk128.to_csv(u=disk128.ground()[1])
    head, first = text.splitlines()[:2]
    assert head == "t,theta,u" and first.startswith("0,0,1")
