import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from bindsig import BaseSort, builtin

acceptance_lines = []


def pytest_terminal_summary(terminalreporter):
    if acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in acceptance_lines:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def ulc():
    return builtin("ulc")


@pytest.fixture(scope="session")
def fol():
    return builtin("fol")


@pytest.fixture(scope="session")
def ll():
    return builtin("ll")


@pytest.fixture(scope="session")
def stlc():
    return builtin("stlc")


@pytest.fixture(scope="session")
def pcf():
    return builtin("pcf")


@pytest.fixture(scope="session")
def nat_sig():
    return builtin("nat")


@pytest.fixture(scope="session")
def star():
    return BaseSort("*")


@pytest.fixture(scope="session")
def iota():
    return BaseSort("iota")
