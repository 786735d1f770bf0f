import numpy as np
import pytest

from bianchi_modl import make_field, split_prime


@pytest.fixture(scope="session")
def F2():
    return make_field(2)


@pytest.fixture(scope="session")
def F1():
    return make_field(1)


@pytest.fixture(scope="session")
def sp11(F2):
    return split_prime(F2, 11)


@pytest.fixture(scope="session")
def sp3(F2):
    return split_prime(F2, 3)


@pytest.fixture(scope="session")
def sp5(F1):
    return split_prime(F1, 5)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
