import numpy as np
import pytest

from motionfields import build_instance


@pytest.fixture(scope="session")
def m2():
    return build_instance("M2")


@pytest.fixture(scope="session")
def m3():
    return build_instance("M3")


@pytest.fixture(scope="session")
def m2xm2():
    return build_instance("M2xM2")


@pytest.fixture()
def rng():
    return np.random.default_rng(20240817)
