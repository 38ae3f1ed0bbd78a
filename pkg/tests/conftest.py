import random

import pytest

from exactcat.categories import DualMod, FinVect, SplitExact, VectNodal, VectP1
from exactcat.linalg import Field


@pytest.fixture
def F7():
    return Field(7)


@pytest.fixture
def F5():
    return Field(5)


@pytest.fixture
def fv():
    return FinVect(Field(7))


@pytest.fixture
def p1():
    return VectP1(Field(7))


@pytest.fixture
def nodal():
    return VectNodal(Field(5))


@pytest.fixture
def dual2():
    return DualMod(Field(2))


@pytest.fixture
def split_fv():
    return SplitExact(Field(7), FinVect(Field(7)))


@pytest.fixture
def rng():
    return random.Random(20261015)


_LINES = pytest.StashKey[list]()


@pytest.fixture
def acceptance_log(request):
    return request.config.stash.setdefault(_LINES, [])


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_LINES, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
