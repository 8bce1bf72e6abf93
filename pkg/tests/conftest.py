import numpy as np
import pytest
from hypothesis import settings

from zassenhaus import AutomorphismGroup, NormalForms, PEnvelope

settings.register_profile("default", max_examples=40, deadline=None)
settings.load_profile("default")


@pytest.fixture(scope="session")
def L():
    return PEnvelope(5, 2)


@pytest.fixture(scope="session")
def L1():
    """p = 5, n = 2 over the prime field."""
    return PEnvelope(5, 2, 1)


@pytest.fixture(scope="session")
def G(L):
    return AutomorphismGroup(L)


@pytest.fixture(scope="session")
def NF(L, G):
    return NormalForms(L, G)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
