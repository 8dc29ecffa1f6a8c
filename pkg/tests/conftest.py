import warnings

import numpy as np
import pytest

from solartank.correlations import CorrelationRangeWarning
from solartank.properties import evaluators
from solartank.tank import TankGeometry

warnings.simplefilter("ignore", CorrelationRangeWarning)

# filled by test_acceptance, echoed at the end of the session
CRITERIA_LINES: list[str] = []


@pytest.fixture
def water():
    return evaluators(False)[0]


@pytest.fixture
def water_const():
    return evaluators(True)[0]


@pytest.fixture
def geometry():
    return TankGeometry()


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    if CRITERIA_LINES:
        terminalreporter.section("acceptance criteria")
        for line in CRITERIA_LINES:
            terminalreporter.write_line(line)
