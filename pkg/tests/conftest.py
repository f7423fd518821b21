import numpy as np
import pytest

from conelab import herm_complex, lorentz, sym_real

ALGEBRAS = [sym_real(2), sym_real(3), herm_complex(2), herm_complex(3), lorentz(3), lorentz(5)]


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: long Monte-Carlo runs")
