import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20231019)


def expm_oracle(gen, t):
    """exp(-i gen t) by scipy's Pade expm, independent of the closed forms."""
    from scipy.linalg import expm

    return expm(-1j * t * gen)
