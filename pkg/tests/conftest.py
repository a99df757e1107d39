import pytest

from flatel.examples import make_example_surface


@pytest.fixture(scope="session")
def torus():
    return make_example_surface("torus")


@pytest.fixture(scope="session")
def unit_cylinder():
    return make_example_surface("cylinder", circumference=2.0, height=1.0)


@pytest.fixture(scope="session")
def dr4():
    return make_example_surface("double_rectangle", t=4.0)


@pytest.fixture(scope="session")
def pillowcase():
    return make_example_surface("pillowcase")


@pytest.fixture(scope="session")
def four_holed():
    return make_example_surface("four_holed_sphere")


@pytest.fixture(scope="session")
def capped():
    return make_example_surface("capped_sphere")
