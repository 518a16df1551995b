import numpy as np
import pytest

from cvwitness.fock_engine import density_state, pure_state


def random_pure(rng, cutoff, support=None):
    """Random pure state with support on photon numbers below ``support``."""
    support = cutoff - 1 if support is None else support
    psi = np.zeros((cutoff + 1, cutoff + 1), dtype=complex)
    k = support
    psi[:k, :k] = rng.normal(size=(k, k)) + 1j * rng.normal(size=(k, k))
    return pure_state(psi)


def random_mixed(rng, cutoff, rank=3, support=None):
    support = cutoff - 1 if support is None else support
    D = (cutoff + 1) ** 2
    rho = np.zeros((D, D), dtype=complex)
    for w in rng.dirichlet(np.ones(rank)):
        v = random_pure(rng, cutoff, support).amplitudes
        rho += w * np.outer(v, v.conj())
    return density_state(rho)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
