import itertools
from fractions import Fraction

import numpy as np
import pytest

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def report():
    def _report(number: int, ok: bool, detail: str) -> None:
        line = f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)
    return _report


def brute_contraction(p) -> object:
    """max S(Px) over x in {0,1}^n; S(Px)/S(x) is maximised at a cube vertex."""
    n = len(p)
    best = 0
    for bits in itertools.product((0, 1), repeat=n):
        y = [sum(p[i][k] * bits[k] for k in range(n)) for i in range(n)]
        best = max(best, max(y) - min(y))
    return best


def random_stochastic(rng, n, den=6):
    """Random exact row-stochastic matrix with some zero entries."""
    rows = []
    for _ in range(n):
        w = [rng.randint(0, den) if rng.random() < 0.7 else 0 for _ in range(n)]
        if not any(w):
            w[rng.randrange(n)] = 1
        s = sum(w)
        rows.append([Fraction(v, s) for v in w])
    return np.array(rows, dtype=object)
