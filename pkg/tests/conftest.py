import numpy as np
import pytest

from condtherm.ensembles import haar_unitary, random_hamiltonian, rng_for

DIMS = (2, 3, 4, 6)
BETAS = (0.2, 1.0, 5.0)


def random_instance(seed, d):
    rng = rng_for(seed, d)
    return random_hamiltonian(rng, d), haar_unitary(rng, d)


def random_density(rng, d, rank=None):
    rank = d if rank is None else rank
    g = rng.standard_normal((d, rank)) + 1j * rng.standard_normal((d, rank))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


# one line per acceptance criterion, echoed in the terminal summary
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
