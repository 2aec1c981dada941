import pytest

from circlepatterns import kernels, torus_grid


@pytest.fixture(params=sorted(kernels.available_backends()))
def backend(request):
    """Run the decorated test once per available kernel backend."""
    previous = kernels.set_backend(request.param)
    yield request.param
    kernels.set_backend(previous)


@pytest.fixture
def torus22():
    return torus_grid(2, 2)


@pytest.fixture
def torus11():
    return torus_grid(1, 1)
