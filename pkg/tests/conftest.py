import random
import sys

import pytest
from hypothesis import strategies as st

from stabset.graph import Graph


@st.composite
def graphs(draw, min_n=1, max_n=12):
    n = draw(st.integers(min_n, max_n))
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    mask = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return Graph(n, tuple(e for e, keep in zip(pairs, mask) if keep))


@st.composite
def graph_and_vector(draw, max_n=12):
    g = draw(graphs(max_n=max_n))
    x = draw(st.lists(st.integers(0, 1), min_size=g.n, max_size=g.n))
    return g, tuple(x)


@pytest.fixture
def rng():
    return random.Random(20240607)


def path3():
    return Graph(3, ((0, 1), (1, 2)))


def triangle():
    return Graph(3, ((0, 1), (0, 2), (1, 2)))


def cycle4():
    return Graph(4, ((0, 1), (1, 2), (2, 3), (0, 3)))


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("tests.test_acceptance")
    if mod is None or not mod.VERDICTS:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(mod.VERDICTS):
        terminalreporter.write_line(mod.VERDICTS[k])
