import numpy as np
import pytest

from jumpstat.model import d_system, four_level

LAMS = {1: 3.574, 2: 1.2454, 4: 0.9229}


@pytest.fixture
def d_scheme():
    return d_system(1e-3, 2e-3, 0.8, detuning=0.3, wavelengths={1: 2.0, 2: 1.5})


@pytest.fixture
def four_scheme():
    return four_level(1e-3, 0.3, 1.2, 1e-2, 0.6, detuning=0.3, wavelengths=LAMS)


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)
