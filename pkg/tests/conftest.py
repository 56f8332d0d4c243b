import pytest

_ACCEPTANCE_LINES = []


@pytest.fixture
def criterion(request):
    """Record one acceptance line, then assert on it."""

    def check(number, title, ok, detail=""):
        line = f"[{'PASS' if ok else 'FAIL'}] AC{number} {title}" + (f" -- {detail}" if detail else "")
        _ACCEPTANCE_LINES.append(line)
        print(line)
        assert ok, line

    return check


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_ACCEPTANCE_LINES, key=lambda s: int(s.split("AC")[1].split()[0])):
            terminalreporter.write_line(line)
