import itertools
import math

import pytest


def enumerated_optimum(N, n, lam):
    """Optimal success probability by plain enumeration, independent of the package."""
    mu = (1 - lam) / (N - 1)
    total = 0.0
    for x in itertools.product(range(N), repeat=n):
        total += max(lam ** x.count(j) * mu ** (n - x.count(j)) for j in range(N))
    return total / N


def interior(N, points):
    lo = 1 / N
    return [lo + (1 - lo) * k / (points + 1) for k in range(1, points + 1)]


@pytest.fixture
def oracle():
    return enumerated_optimum


@pytest.fixture
def grid():
    return interior


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import REPORT
    except ImportError:
        return
    if REPORT:
        terminalreporter.section("acceptance criteria")
        for line in REPORT:
            terminalreporter.write_line(line)
