import pytest

_ACCEPTANCE_LINES = []


@pytest.fixture
def acceptance():
    """Collects one PASS/FAIL line per acceptance criterion; the lines are
    echoed in the terminal summary so they survive output capture."""

    def record(num: int, desc: str, ok: bool) -> None:
        _ACCEPTANCE_LINES.append(f"criterion {num}: {'PASS' if ok else 'FAIL'} - {desc}")

    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
