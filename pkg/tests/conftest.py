import pytest

from sta_designer.gpe import Grid
from sta_designer.models import Model, PhysicalParams


@pytest.fixture
def linear_params():
    return PhysicalParams(g_n=0.0, gamma=10.0, delta=1.0)


@pytest.fixture
def repulsive_params():
    return PhysicalParams(g_n=0.01, gamma=10.0, delta=1.0)


@pytest.fixture
def ordinary_params():
    return PhysicalParams(g_n=0.0, gamma=10.0, delta=1.0, model=Model.ORDINARY)


@pytest.fixture
def small_grid():
    """Enough for clouds of width ~1."""
    return Grid(16.0, 512)


@pytest.fixture
def full_grid():
    return Grid(128.0, 4096)
