import pytest

from enas_lab import make_instance

# acceptance verdict lines, echoed after the run so capture never hides them
acceptance_lines: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in acceptance_lines:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def inst8():
    return make_instance(8)


@pytest.fixture(scope="session")
def inst16():
    return make_instance(16)
