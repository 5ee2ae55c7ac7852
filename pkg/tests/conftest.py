import pytest

_ACCEPTANCE: list[tuple[str, bool, str]] = []


@pytest.fixture
def acceptance_line():
    """Record one pass/fail line for the acceptance summary."""
    def record(name: str, passed: bool, detail: str) -> None:
        _ACCEPTANCE.append((name, passed, detail))
        print(f"{name}: {'PASS' if passed else 'FAIL'} ({detail})")
    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name, passed, detail in sorted(_ACCEPTANCE):
        terminalreporter.write_line(f"{name}: {'PASS' if passed else 'FAIL'}  {detail}")
