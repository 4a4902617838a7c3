import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from blaschke import Polytope

settings.register_profile(
    "default", max_examples=40, deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)


@pytest.fixture
def cube():
    return Polytope.cube()


@pytest.fixture
def octahedron():
    return Polytope.cross_polytope(3)


@pytest.fixture
def simplex():
    return Polytope.from_vertices(np.vstack([np.zeros(3), np.eye(3)]))
