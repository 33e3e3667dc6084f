import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from stepsel.core import correlation, standardize

settings.register_profile(
    "default", max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


def random_data(rng, n, m, n_factors=None):
    """Gaussian rows, optionally mixed through a few shared factors so that
    features cluster (the interesting case for greedy selection)."""
    if n_factors:
        loadings = rng.normal(size=(n, n_factors))
        return loadings @ rng.normal(size=(n_factors, m)) + 0.5 * rng.normal(size=(n, m))
    return rng.normal(size=(n, m))


def instance(seed, n, m_factor=4, n_factors=None):
    """(Z, M) for a seeded random problem."""
    rng = np.random.default_rng(seed)
    Z = standardize(random_data(rng, n, m_factor * n, n_factors))
    return Z, correlation(Z)


@pytest.fixture
def M3():
    return np.array([[1.0, 0.5, 0.5], [0.5, 1.0, 0.5], [0.5, 0.5, 1.0]])


@pytest.fixture
def M_pair():
    # features 0 and 1 nearly duplicate, 2 mostly independent
    return np.array([[1.0, 0.9, 0.1], [0.9, 1.0, 0.1], [0.1, 0.1, 1.0]])


# one line per acceptance criterion, printed after the run
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
