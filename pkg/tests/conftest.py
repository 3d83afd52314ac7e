import numpy as np
import pytest

from wehrl_jcm.core import BlochVector

ACCEPTANCE_LINES = []


def random_bloch_vectors(n, seed, max_length=1.0):
    """Bloch vectors uniform in the ball of radius ``max_length``."""
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(n):
        x = rng.normal(size=3)
        x *= max_length * rng.uniform() ** (1.0 / 3.0) / np.linalg.norm(x)
        out.append(BlochVector(*x))
    return out


@pytest.fixture
def acceptance_report():
    """Collects one pass/fail line per acceptance criterion for the terminal summary."""

    def report(label, passed, detail=""):
        status = "PASS" if passed else "FAIL"
        ACCEPTANCE_LINES.append(f"[{status}] {label}" + (f" -- {detail}" if detail else ""))
        return passed

    return report


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)

