from pathlib import Path

import pytest

DATA = Path(__file__).parent / "data"
MOCK_SOLVER = Path(__file__).parent / "mock_solver.sh"

_ACCEPTANCE: list = []


@pytest.fixture
def acceptance():
    """Record one pass/fail line per acceptance criterion."""

    def record(number, ok, detail):
        _ACCEPTANCE.append((number, bool(ok), detail))
        return ok

    return record


@pytest.fixture(scope="session")
def running_example_text():
    return (DATA / "running_example.smt2").read_text()


@pytest.fixture(scope="session")
def mock_cmd():
    return f"sh {MOCK_SOLVER} {{}}"


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number, ok, detail in sorted(_ACCEPTANCE, key=lambda r: r[0]):
        terminalreporter.write_line(f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {detail}")
