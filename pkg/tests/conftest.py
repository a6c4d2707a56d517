import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from endocross.algebra import BlockIdeal, FdAlgebra
from endocross.endo import Endomorphism

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture
def sys1():
    """alpha(x, y, z) = (y, z, z) on C^3."""
    return Endomorphism(FdAlgebra([1, 1, 1]), [[0, 1, 0], [0, 0, 1], [0, 0, 1]])


@pytest.fixture
def sys2():
    """alpha(x, y) = (x, x) on C^2."""
    return Endomorphism(FdAlgebra([1, 1]), [[1, 0], [1, 0]])


@pytest.fixture
def swap():
    return Endomorphism(FdAlgebra([1, 1]), [[0, 1], [1, 0]])


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def ideal(endo, *members):
    return BlockIdeal(endo.algebra, members)
