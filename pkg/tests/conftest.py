import numpy as np
import pytest

from bjjcat import build_hamiltonian, ModelParams, ground_state


@pytest.fixture(scope="session")
def ground():
    """Cached ground states keyed by (N, lam)."""
    cache = {}

    def get(N, lam):
        if (N, lam) not in cache:
            H = build_hamiltonian(ModelParams(N, lam))
            cache[N, lam] = (H, ground_state(H))
        return cache[N, lam]

    return get


def dense(N, lam):
    return build_hamiltonian(ModelParams(N, lam)).to_dense()


def eigvals_numpy(N, lam):
    return np.linalg.eigvalsh(dense(N, lam))


ACCEPTANCE_LINES = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[key])
