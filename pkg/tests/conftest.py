import pytest

from outbreaknet import fixtures


@pytest.fixture(scope="session")
def nigeria():
    return fixtures.case_network("nigeria")


@pytest.fixture(scope="session")
def us():
    return fixtures.case_network("us")


@pytest.fixture(scope="session")
def west_africa():
    return fixtures.case_network("west_africa")


@pytest.fixture(scope="session")
def table1():
    return fixtures.media_counts()


def pytest_terminal_summary(terminalreporter):
    import sys
    mod = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    if mod and mod.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in sorted(mod.RESULTS):
            terminalreporter.write_line(line)
