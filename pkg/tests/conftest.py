import os
import sys

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, os.path.dirname(__file__))

settings.register_profile(
    "default",
    deadline=None,
    max_examples=25,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)
settings.load_profile("default")


@pytest.fixture(scope="session")
def square():
    from homothety_lab.bodies import Polytope
    return Polytope([[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]])


@pytest.fixture(scope="session")
def triangle():
    from homothety_lab.bodies import Polytope
    return Polytope([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]])


@pytest.fixture(scope="session")
def hexagon():
    from homothety_lab.bodies import Polytope
    ang = np.pi / 3.0 * np.arange(6)
    return Polytope(np.stack([np.cos(ang), np.sin(ang)], axis=1))


@pytest.fixture(scope="session")
def disk():
    from homothety_lab.bodies import Ball
    return Ball(1.0, [0.0, 0.0])
