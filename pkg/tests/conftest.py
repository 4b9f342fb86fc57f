from __future__ import annotations

import pytest

from ctxcert import exclusivity, fixtures, mabk

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def family3():
    return mabk.mu_family(3)


@pytest.fixture(scope="session")
def graph3(family3):
    return exclusivity.build_graph(family3)


@pytest.fixture(scope="session")
def family5():
    return mabk.mu_family(5)


@pytest.fixture(scope="session")
def graph5(family5):
    return exclusivity.build_graph(family5)


@pytest.fixture(scope="session")
def reference():
    return fixtures.load_reference()


@pytest.fixture(scope="session")
def reference_graph(reference):
    return exclusivity.ExclusivityGraph(16, tuple(reference.edges))
