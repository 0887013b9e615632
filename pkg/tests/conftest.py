import numpy as np
import pytest

from csi.amplitudes import build_grid

# coarse grid for unit tests; the acceptance suite uses the default one
SMALL_GRID = build_grid(6.0, 192)


@pytest.fixture
def small_grid():
    return SMALL_GRID


@pytest.fixture
def rng():
    return np.random.Generator(np.random.Philox(key=1234))


# lines recorded by test_acceptance.py, echoed after the run
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
