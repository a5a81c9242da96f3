import numpy as np
import pytest

# worked odd-only example: A = L M^-1 with L = 1 + C2
ODD_ONLY = np.array([[27, 9, 9], [18, 11, 16], [18, 16, 11]]) / 45.0
ODD_ONLY_LIMIT = np.array([[1.0, 0, 0], [0, 0, 1], [0, 1, 0]])
ODD_ONLY_M = np.array([[3.0, -1, -1], [-2, 6, -3], [-2, -3, 6]])


@pytest.fixture
def odd_only():
    return ODD_ONLY.copy()


@pytest.fixture
def rng():
    return np.random.default_rng(20261019)


def random_generator(rng, n, scale=5.0):
    """Random rate matrix with infinity norm at most ``scale``."""
    Q = rng.random((n, n))
    np.fill_diagonal(Q, 0.0)
    Q *= (scale / 2) / Q.sum(axis=1, keepdims=True) * rng.random((n, 1))
    np.fill_diagonal(Q, -Q.sum(axis=1))
    return Q


# acceptance lines collected by test_acceptance.py, printed after the run
ACCEPTANCE_LINES: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for key in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[key])
