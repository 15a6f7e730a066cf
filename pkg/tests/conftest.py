import numpy as np
import pytest

from fcssk import derive_params
from fcssk.txmod import make_mod_params


@pytest.fixture(scope="session")
def chirp():
    """The simulation operating point: B0=1024 Hz, R=4 Hz, fs=2^16."""
    return derive_params(1024.0, 4.0, 65536)


@pytest.fixture(scope="session")
def man128(chirp):
    return make_mod_params(chirp, "manchester", 128)


@pytest.fixture(scope="session")
def b6b8_128(chirp):
    return make_mod_params(chirp, "6b8b", 128)


@pytest.fixture()
def rng():
    return np.random.default_rng(0xF055)
