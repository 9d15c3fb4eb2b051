import math

import pytest

from tonelab.discrete_domain import build_interval_domain, build_polar_domain
from tonelab.radial_eigen import WarpProfile


@pytest.fixture(scope="session")
def disk128():
    return build_polar_domain(WarpProfile.model(0.0, 1.0, 128), N_theta=64)


@pytest.fixture(scope="session")
def disk256():
    return build_polar_domain(WarpProfile.model(0.0, 1.0, 256), N_theta=64)


@pytest.fixture(scope="session")
def hemisphere_cap():
    return build_polar_domain(WarpProfile.model(1.0, math.pi / 2, 256), N_theta=32)


@pytest.fixture(scope="session")
def interval2048():
    return build_interval_domain(0.0, 1.0, 2048)
