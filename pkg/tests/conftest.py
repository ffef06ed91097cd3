import numpy as np
import pytest
from hypothesis import settings

settings.register_profile("capt", max_examples=30, deadline=None)
settings.load_profile("capt")


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def loop_partial_trace_b(M, dA, dB):
    """Reference partial trace by explicit index loops."""
    out = np.zeros((dA, dA), dtype=complex)
    for i in range(dA):
        for j in range(dA):
            for m in range(dB):
                out[i, j] += M[i * dB + m, j * dB + m]
    return out


def choi_by_sum(f, d):
    """Reference Choi matrix ``Σ f(|i><j|) ⊗ |i><j|``."""
    J = 0
    for i in range(d):
        for j in range(d):
            E = np.zeros((d, d), dtype=complex)
            E[i, j] = 1
            J = J + np.kron(f(E), E)
    return J


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
