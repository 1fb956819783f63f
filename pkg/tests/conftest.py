import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from shiftorbit import ShiftOperator, WeightSpec  # noqa: E402


@pytest.fixture
def blocks():
    return ShiftOperator(WeightSpec.paper_blocks())


@pytest.fixture
def rolewicz2():
    return ShiftOperator(WeightSpec.rolewicz(2.0))


@pytest.fixture
def ratio2():
    return ShiftOperator(WeightSpec.ratio_power(2.0))


@pytest.fixture
def identity_shift():
    return ShiftOperator(WeightSpec.constant(1.0, "bilateral"))


ACCEPTANCE_RESULTS = {}


def pytest_runtest_logreport(report):
    if report.when == "call" and "test_acceptance.py" in report.nodeid:
        name = report.nodeid.split("::")[-1]
        ACCEPTANCE_RESULTS[name] = report.outcome


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome in sorted(ACCEPTANCE_RESULTS.items(),
                                key=lambda kv: int(kv[0].split("_")[1][1:])):
        terminalreporter.write_line(f"{'PASS' if outcome == 'passed' else 'FAIL'}  {name}")
