import math

import numpy as np
import pytest
from hypothesis import settings, strategies as st

from oscillator_berry.oscillator_params import InitialData

settings.register_profile("default", deadline=None, max_examples=40)
settings.load_profile("default")

FIG1_BETA0 = 2.0 / 3.0


@pytest.fixture
def textbook():
    return InitialData.textbook()


@pytest.fixture
def figure1():
    """Figure-1 data with mu0 = 1; normalization does not enter phases."""
    return InitialData.figure1(mu0=1.0)


@pytest.fixture
def rng():
    return np.random.default_rng(20261019)


def random_data(rng, alpha=2.0, beta=(0.3, 3.0), shift=2.0, mu=(0.5, 2.0)):
    """One random member of the family inside the given ranges."""
    return InitialData(
        mu0=rng.uniform(*mu),
        alpha0=rng.uniform(-alpha, alpha),
        beta0=rng.uniform(*beta),
        gamma0=rng.uniform(-math.pi, math.pi),
        delta0=rng.uniform(-shift, shift),
        eps0=rng.uniform(-shift, shift),
        kappa0=rng.uniform(-math.pi, math.pi),
    )


def _real(lo, hi):
    return st.floats(lo, hi, allow_nan=False, allow_infinity=False)


initial_data = st.builds(
    InitialData,
    mu0=_real(0.2, 3.0),
    alpha0=_real(-2.0, 2.0),
    beta0=_real(0.3, 3.0),
    gamma0=_real(-3.0, 3.0),
    delta0=_real(-2.0, 2.0),
    eps0=_real(-2.0, 2.0),
    kappa0=_real(-3.0, 3.0),
)

# mild squeezing keeps grids for the wavefunction checks small
mild_data = st.builds(
    InitialData,
    mu0=_real(0.5, 2.0),
    alpha0=_real(-0.5, 0.5),
    beta0=_real(0.6, 1.6),
    gamma0=_real(-3.0, 3.0),
    delta0=_real(-1.0, 1.0),
    eps0=_real(-1.0, 1.0),
    kappa0=_real(-3.0, 3.0),
)


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import VERDICTS

    if VERDICTS:
        terminalreporter.section("acceptance criteria")
        for line in sorted(VERDICTS):
            terminalreporter.write_line(line)
