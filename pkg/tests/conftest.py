import pytest

# Pass/fail lines collected by the acceptance tests; shown after the run
# regardless of output capture settings.
_criterion_lines: list[str] = []


@pytest.fixture(scope="session")
def criterion_report():
    return _criterion_lines


def pytest_terminal_summary(terminalreporter):
    if _criterion_lines:
        terminalreporter.section("acceptance criteria")
        for line in _criterion_lines:
            terminalreporter.write_line(line)
