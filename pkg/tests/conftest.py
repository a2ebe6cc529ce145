import numpy as np
import pytest

from modsymm.bie.densities import get_density
from modsymm.bie.kernel import Convention, build_kernel_parts
from modsymm.geometry import Circle, Ellipse, ExpBlob

# Radius at which -ln a = 1/2, so S_K maps the constant 1 to itself
UNIT_CAPACITY_RADIUS = float(np.exp(-0.5))


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def circle():
    return Circle(UNIT_CAPACITY_RADIUS)


@pytest.fixture
def ellipse():
    return Ellipse(1.0, 2.0)


@pytest.fixture
def expblob():
    return ExpBlob()


@pytest.fixture
def circle_parts(circle):
    return build_kernel_parts(circle, Convention.DOUBLED, 16)


@pytest.fixture
def ellipse_parts(ellipse):
    return build_kernel_parts(ellipse, Convention.DOUBLED, 12)


@pytest.fixture
def exp_sin():
    return get_density("exp-sin")
