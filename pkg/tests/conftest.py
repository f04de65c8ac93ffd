import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def brute_partial_transpose(rho, d1, d2):
    """Index-by-index partial transpose on the second factor."""
    out = np.zeros_like(rho)
    for i in range(d1):
        for j in range(d2):
            for k in range(d1):
                for l in range(d2):
                    out[i * d2 + j, k * d2 + l] = rho[i * d2 + l, k * d2 + j]
    return out


def brute_negativity(rho, d1, d2):
    ev = np.linalg.eigvals(brute_partial_transpose(rho, d1, d2)).real
    return -ev[ev < 0].sum()


ACCEPTANCE_LINES = []


class criterion:
    """Record one PASS/FAIL line per acceptance criterion, re-raising failures."""

    def __init__(self, number, title):
        self.number, self.title = number, title
        self.details = []

    def note(self, text):
        self.details.append(text)

    def __enter__(self):
        return self

    def __exit__(self, exc_type, exc, tb):
        status = "PASS" if exc_type is None else "FAIL"
        detail = "; ".join(self.details)
        if exc is not None:
            detail = f"{detail}; {exc_type.__name__}: {exc}".strip("; ")
        line = f"{status} criterion {self.number} ({self.title}): {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)
        return False


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
