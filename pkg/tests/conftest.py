import pytest

from cycord.order import load_algebra


@pytest.fixture(scope="session")
def golden():
    return load_algebra("golden_u_i")


@pytest.fixture(scope="session")
def golden_1pi():
    return load_algebra("golden_u_1pi")


@pytest.fixture(scope="session")
def q7():
    return load_algebra("q7_cubic")


@pytest.fixture(scope="session")
def q15():
    return load_algebra("q15_quartic")


@pytest.fixture(scope="session")
def gauss():
    return load_algebra("gauss_over_Q")


@pytest.fixture(scope="session")
def gauss_u5():
    return load_algebra("gauss_over_Q", u="5")
