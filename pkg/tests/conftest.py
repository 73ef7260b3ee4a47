import functools

import pytest

from gwbessel.oracle import exact_J

# lines collected by the acceptance module, echoed in the terminal summary
ACCEPTANCE_LINES = []


@functools.lru_cache(maxsize=None)
def oracle_float(nu, x, digits=20):
    return float(exact_J(nu, x, digits).value)


@pytest.fixture
def oracle():
    return oracle_float


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
