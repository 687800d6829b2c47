import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def random_unimodular(k, d, rng, steps=None):
    """Product of random elementary row operations, so invertible mod d."""
    M = np.eye(k, dtype=np.int64)
    units = [u for u in range(1, d) if np.gcd(u, d) == 1]
    for _ in range(steps or 4 * k):
        i, j = rng.integers(k, size=2)
        if i != j:
            M[i] = (M[i] + int(rng.integers(d)) * M[j]) % d
        M[i] = (M[i] * int(rng.choice(units))) % d
    return M


def pytest_terminal_summary(terminalreporter):
    """Repeat the acceptance lines, which are otherwise captured."""
    import sys

    module = sys.modules.get("test_acceptance")
    lines = getattr(module, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split("criterion ")[1].split(":")[0])):
            terminalreporter.write_line(line)
