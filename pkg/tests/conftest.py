import random
from pathlib import Path

import pytest

from shatiyah.fixtures import delta_pair, k_pair, lie_pair
from shatiyah.shlie import quotient_module

EXAMPLES = Path(__file__).resolve().parent.parent / "examples"


@pytest.fixture
def rng():
    return random.Random(20240611)


@pytest.fixture
def kpair():
    return k_pair()


@pytest.fixture
def dpair():
    pair = delta_pair()
    return pair, quotient_module(pair)


@pytest.fixture
def lpair():
    return lie_pair()


def example(name):
    return EXAMPLES / name


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in range(1, 11):
        ok, detail = mod.RESULTS.get(n, (False, "not run"))
        terminalreporter.write_line("criterion %d: %s - %s (%s)" % (n, "PASS" if ok else "FAIL",
                                                                     mod.TITLES[n], detail))
