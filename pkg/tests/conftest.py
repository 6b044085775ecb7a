import numpy as np
import pytest

from ifmsim.qstate import DIM, make_state

ACCEPTANCE_RESULTS = []


def random_joint_state(rng):
    return make_state(rng.normal(size=DIM) + 1j * rng.normal(size=DIM))


def random_unitary(rng, n):
    z = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_ev_amplitudes(rng):
    """Random complex (alpha, beta) with |alpha|^2 + |beta|^2 = 1."""
    v = rng.normal(size=2) + 1j * rng.normal(size=2)
    v /= np.linalg.norm(v)
    return complex(v[0]), complex(v[1])


@pytest.fixture
def rng():
    return np.random.default_rng(20240917)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in ACCEPTANCE_RESULTS:
        terminalreporter.write_line(line)
