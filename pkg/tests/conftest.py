import pytest

_ACCEPTANCE_LINES = []


@pytest.fixture
def record_criterion():
    """Return ``record(number, failures, detail)`` which prints one pass/fail line."""

    def record(number, failures, detail):
        status = "PASS" if not failures else "FAIL"
        line = f"criterion {number}: {status} {detail}"
        if failures:
            line += f" ({len(failures)} failures, first: {failures[0]})"
        print(line)
        _ACCEPTANCE_LINES.append(line)
        return line

    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
