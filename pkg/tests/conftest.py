import random
import sys

import pytest

from spantrees.generators import complete, cycle, multiply, path, random_multigraph, tree_union
from spantrees.graph import MultiGraph


@pytest.fixture
def k4():
    return complete(4)


@pytest.fixture
def c5():
    return cycle(5)


@pytest.fixture
def p3():
    return path(3)


@pytest.fixture
def k2x2():
    """Two parallel edges a=0, b=1 between u=0 and v=1."""
    return MultiGraph(2, ((0, 1), (0, 1)))


@pytest.fixture
def k2x3():
    return MultiGraph(2, ((0, 1), (0, 1), (0, 1)))


@pytest.fixture
def doubled_p3():
    return multiply(path(3), 2)


@pytest.fixture
def triangle():
    # ab=0, bc=1, ac=2
    return MultiGraph(3, ((0, 1), (1, 2), (0, 2)))


def small_multigraphs(count, seed, max_n=6, max_extra=5, connected=True):
    """Seeded connected multigraphs mixing sparse random graphs and tree unions."""
    rng = random.Random(seed)
    out = []
    for i in range(count):
        n = rng.randint(1, max_n)
        if n == 1:
            out.append(MultiGraph(1))
            continue
        if rng.random() < 0.35:
            out.append(tree_union(n, rng.randint(1, 3), rng.randrange(10**9)))
        else:
            m = n - 1 + rng.randint(0, max_extra)
            out.append(random_multigraph(n, m, rng.randrange(10**9), connected=connected))
    return out


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
