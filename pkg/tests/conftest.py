import pytest

from gitcluster.datagen import SyntheticSpec, generate


@pytest.fixture(scope="session")
def circles_1000():
    return generate(SyntheticSpec(shape="circles", n=1000, seed=0))


@pytest.fixture(scope="session")
def moons_1000():
    return generate(SyntheticSpec(shape="moons", n=1000, seed=0))
