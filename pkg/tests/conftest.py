from fractions import Fraction

import pytest

from freechoquet.core import validate_metric

HALF = Fraction(1, 2)


@pytest.fixture
def L3():
    return validate_metric(["0", "h", "1"], [[0, HALF, 1], [HALF, 0, HALF], [1, HALF, 0]], "0")


@pytest.fixture
def W4():
    d = [[0, 1, 1, 1], [1, 0, HALF, 1], [1, HALF, 0, 1], [1, 1, 1, 0]]
    return validate_metric(["0", "a", "b", "c"], d, "0")


@pytest.fixture
def D4():
    return validate_metric(["0", "1", "2", "3"], [[int(i != j) for j in range(4)] for i in range(4)], "0")


def pytest_terminal_summary(terminalreporter):
    import sys

    module = sys.modules.get("test_acceptance")
    lines = getattr(module, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
