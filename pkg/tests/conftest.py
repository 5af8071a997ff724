import sys
from fractions import Fraction as F

import pytest

from srs.params import SrsParameter

EX311 = (F(9, 10), F(-11, 20))
EX312 = (F(3, 4), F(1))
CNS_HALF = (F(1, 2), F(-1, 2))
CYCLE_311 = [(-1, -1), (-1, 1), (1, 2), (2, 1), (1, -1)]


def param(*coords) -> SrsParameter:
    return SrsParameter([F(c) for c in coords])


@pytest.fixture
def r311():
    return param(*EX311)


@pytest.fixture
def r312():
    return param(*EX312)


@pytest.fixture
def rhalf():
    return param(*CNS_HALF)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.report_lines():
        terminalreporter.write_line(line)
