import numpy as np
import pytest
from hypothesis import settings

from bqkz.qseries import QBase
from bqkz.weightspace import Params

settings.register_profile("repro", derandomize=True)
settings.load_profile("repro")

# Generic weights, moderate |q|; the three points sit just inside A_tilde_tau
# (gap > 3.56, Re t_N > 2.18) so that the qKZ checks run near the sector boundary.
STANDARD_POINTS = [
    np.array([6.0 + 0.2j, 2.3 - 0.1j]),
    np.array([6.3 - 0.4j, 2.5 + 0.3j]),
    np.array([7.0 + 1.0j, 2.9 - 0.5j]),
]


def standard_params(M=2, N=2):
    ell = (1.5 + 0.2j, 1.4 - 0.1j, 1.6 + 0.05j)[:N]
    return Params(QBase(-0.4 + 0.3j), 0.8 + 0.1j, 0.3 + 0.1j, -0.2 + 0.3j, ell, M)


def spin_half_params(M=1):
    return Params(QBase(-0.5 + 0.2j), 1.2 + 0.1j, 0.3 + 0.1j, -0.2 + 0.3j, (0.5, 0.5), M)


SPIN_HALF_POINT = np.array([5.2 + 0.2j, 2.1 - 0.1j])


@pytest.fixture
def params():
    return standard_params()


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
