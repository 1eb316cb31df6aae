import itertools

import pytest

from outtree.graph import Digraph, OutTree


def digraph(n, arcs):
    return Digraph.from_arcs(n, arcs)


def tree(*parents):
    return OutTree.from_parents(parents)


def all_digraphs(n):
    pairs = [(u, v) for u in range(n) for v in range(n) if u != v]
    for bits in range(1 << len(pairs)):
        yield Digraph.from_arcs(n, [p for i, p in enumerate(pairs) if bits >> i & 1])


def complete(n):
    return Digraph.from_arcs(n, [(u, v) for u, v in itertools.permutations(range(n), 2)])


def path(n):
    return Digraph.from_arcs(n, [(i, i + 1) for i in range(n - 1)])


def cycle(n):
    return Digraph.from_arcs(n, [(i, (i + 1) % n) for i in range(n)])


@pytest.fixture
def arc_tree():
    return tree(None, 0)


@pytest.fixture
def path3():
    return tree(None, 0, 1)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS, summary_line
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for number in sorted(RESULTS):
            terminalreporter.write_line(summary_line(number))
