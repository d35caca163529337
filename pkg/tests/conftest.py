from pathlib import Path

import pytest

DATA = Path(__file__).parent / "data"


@pytest.fixture
def golden_tape_path():
    return DATA / "golden_tape.csv"


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
