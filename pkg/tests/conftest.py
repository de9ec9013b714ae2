import numpy as np
import pytest

from cachediv.placement import CachePlacement

ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def rng():
    return np.random.default_rng(20260101)


def identity_placement(n):
    return CachePlacement(np.arange(n)[:, None])
