import pytest

ACCEPTANCE_LINES = []


@pytest.fixture
def report():
    """Record one acceptance line; call it before asserting."""
    def record(number, passed, detail):
        ACCEPTANCE_LINES.append(
            (number, f"criterion {number:>2}: {'PASS' if passed else 'FAIL'}  {detail}"))
    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
