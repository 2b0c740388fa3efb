import pytest

_LINES = []


@pytest.fixture
def verdict():
    """Record one pass/fail line for the acceptance summary, then assert."""

    def record(label, ok, detail):
        line = f"{label}: {'PASS' if ok else 'FAIL'} - {detail}"
        _LINES.append(line)
        print(line)
        assert ok, line

    return record


def pytest_terminal_summary(terminalreporter):
    if _LINES:
        terminalreporter.section("acceptance criteria")
        for line in _LINES:
            terminalreporter.write_line(line)
