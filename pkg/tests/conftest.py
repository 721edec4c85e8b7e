import math
from fractions import Fraction

import pytest
from hypothesis import settings

from cms import FullShift, LoopSystem, LoopTail, golden_mean

settings.register_profile("default", deadline=None, max_examples=100)
settings.load_profile("default")

GOLDEN = math.log((1 + math.sqrt(5)) / 2)
HALF = Fraction(1, 2)


@pytest.fixture
def gm():
    return golden_mean()


@pytest.fixture
def full():
    return FullShift()


@pytest.fixture
def ones():
    """One loop of every length."""
    return LoopSystem({}, LoopTail("constant", 1))


@pytest.fixture
def rome_loops():
    """One loop of length 1, infinitely many of length 2, nothing else."""
    return LoopSystem({1: 1, 2: math.inf})


@pytest.fixture
def gm_loops():
    return LoopSystem({1: 1, 2: 1}, base=1)


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(results):
        terminalreporter.write_line(results[n])
