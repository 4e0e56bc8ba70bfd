import random

import pytest

_CRITERIA: dict = {}


def record(number: int, title: str, passed: bool, detail: str = ""):
    """Store one acceptance line; printed at the end of the session."""
    line = f"criterion {number:2d}: {'PASS' if passed else 'FAIL'}  {title}"
    if detail:
        line += f"  [{detail}]"
    _CRITERIA[number] = line
    print(line)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        terminalreporter.write_line(_CRITERIA[number])


@pytest.fixture(scope="session")
def rng():
    return random.Random(20241019)
