import pytest

from bogoliubov.potentials import make_bessel4, make_gaussian

ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def gaussian():
    return make_gaussian(1.0)


@pytest.fixture(scope="session")
def bessel4():
    return make_bessel4(1.0)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def acceptance():
    """Record one PASS/FAIL line for an acceptance criterion, then assert it."""

    def record(number, title, ok, detail):
        line = f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {title} -- {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)
        assert ok, line

    return record
