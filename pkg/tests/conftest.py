import pytest

from recurcommon.baker import certify
from recurcommon.recurrence import RecurrenceSpec

ACCEPTANCE_LINES: dict[int, str] = {}


def pow2() -> RecurrenceSpec:
    return RecurrenceSpec((2,), (1,), "2^n")


def x2p4() -> RecurrenceSpec:
    return RecurrenceSpec((-4, 0), (2, 0), "X^2+4")


def trib_forward() -> RecurrenceSpec:
    return RecurrenceSpec((1, 1, 1), (0, 1, 1), "tribonacci forward")


def trib_backward() -> RecurrenceSpec:
    return RecurrenceSpec((1, -1, -1), (0, 0, 1), "tribonacci backward")


def tribonacci() -> RecurrenceSpec:
    # T_{-1} = T_0 = 0, T_1 = 1
    return RecurrenceSpec((1, 1, 1), (0, 0, 1), "tribonacci", -1)


@pytest.fixture(scope="session")
def trib_cert():
    return certify(trib_forward(), trib_backward())


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for k in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[k])
