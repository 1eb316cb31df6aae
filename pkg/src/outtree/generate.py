"""Random and planted instances for tests and benchmarks."""
from __future__ import annotations

import functools
import random
from dataclasses import dataclass

from .graph import Digraph, OutTree
from .trees import enumerate_rooted_trees


@functools.lru_cache(maxsize=None)
def _shapes(k: int) -> tuple:
    return tuple(enumerate_rooted_trees(k))


def random_rooted_tree(k: int, rnd: random.Random) -> OutTree:
    """Uniform over isomorphism classes of rooted trees on ``k`` vertices."""
    return rnd.choice(_shapes(k))


def random_digraph(n: int, density: float, rnd: random.Random) -> Digraph:
    arcs = [(u, v) for u in range(n) for v in range(n) if u != v and rnd.random() < density]
    return Digraph.from_arcs(n, arcs)


@dataclass(frozen=True)
class PlantedInstance:
    graph: Digraph
    tree: OutTree
    embedding: dict  # pattern vertex -> digraph vertex
    seed: int

    @property
    def root(self) -> int:
        return self.embedding[self.tree.root]


def planted_instance(n: int, k: int, density: float, seed: int) -> PlantedInstance:
    """Random pattern copied onto ``k`` random distinct vertices, plus noise arcs."""
    if k > n:
        raise ValueError("cannot plant a pattern larger than the digraph")
    rnd = random.Random(seed)
    tree = random_rooted_tree(k, rnd)
    image = rnd.sample(range(n), k)
    phi = {u: image[u] for u in range(k)}
    arcs = {(phi[p], phi[c]) for p, c in tree.arcs()}
    for u in range(n):
        for v in range(n):
            if u != v and rnd.random() < density:
                arcs.add((u, v))
    return PlantedInstance(Digraph.from_arcs(n, sorted(arcs)), tree, phi, seed)
