"""Color-coding baseline of Alon, Yuster and Zwick for out-tree detection.

Under a fixed k-coloring, :func:`ayz_color_sets` computes for every digraph
vertex the color sets of the colorful copies of the pattern rooted there.
The pattern is split at the arc from the root to its first child; the two
halves are solved recursively and merged over the arcs of the digraph.
Color sets are k-bit masks.
"""
from __future__ import annotations

import math
from typing import Sequence

from . import rng
from .engine import SolveStats
from .graph import Digraph, OutTree

__all__ = ["ayz_color_sets", "ayz_find", "default_trials", "MAX_AYZ_K"]

MAX_AYZ_K = 10


class _Counter:
    ops = 0


def _color_masks(tree: OutTree, d: Digraph, coloring: Sequence[int], counter) -> list[set[int]]:
    k = tree.k
    if len(coloring) != d.n:
        raise ValueError("coloring must assign a color to every digraph vertex")
    if any(not 1 <= c <= k for c in coloring):
        raise ValueError(f"colors must lie in [1, {k}]")
    single = [{1 << (c - 1)} for c in coloring]
    memo: dict[tuple[int, int], list[set[int]]] = {}

    def rec(u: int, i: int) -> list[set[int]]:
        # pattern: u together with the full subtrees of children[u][i:]
        key = (u, i)
        if key in memo:
            return memo[key]
        kids = tree.children[u]
        if i == len(kids):
            memo[key] = single
            return single
        upper = rec(u, i + 1)
        lower = rec(kids[i], 0)
        out: list[set[int]] = []
        for x in range(d.n):
            fam: set[int] = set()
            if upper[x]:
                for y in d.out_adj[x]:
                    for c2 in lower[y]:
                        for c1 in upper[x]:
                            counter.ops += 1
                            if not c1 & c2:
                                fam.add(c1 | c2)
            out.append(fam)
        memo[key] = out
        return out

    return rec(tree.root, 0)


def ayz_color_sets(
    tree: OutTree, d: Digraph, coloring: Sequence[int], r: int | None = None
) -> list[set[frozenset]]:
    """Per digraph vertex ``u``: color sets of colorful copies where ``u`` plays the root.

    ``coloring[v]`` is the color of digraph vertex ``v`` in ``1..k``.
    """
    if r is not None and r != tree.root:
        raise ValueError("the designated pattern vertex must be the root")
    masks = _color_masks(tree, d, coloring, _Counter())
    return [
        {frozenset(i + 1 for i in range(tree.k) if m >> i & 1) for m in fam} for fam in masks
    ]


def default_trials(k: int) -> int:
    return math.ceil(math.e**k)


def ayz_find(
    tree: OutTree,
    d: Digraph,
    trials: int | None = None,
    seed: int = 0,
    stats: SolveStats | None = None,
    existence_only: bool = False,
    guard: int = MAX_AYZ_K,
) -> set[int] | None:
    """Union over random colorings of the roots of colorful copies, or ``None``."""
    k = tree.k
    if k > guard:
        raise ValueError(f"pattern size {k} exceeds the color-coding limit {guard}")
    trials = default_trials(k) if trials is None else trials
    stats = stats if stats is not None else SolveStats()
    if k > d.n:
        return None
    base = rng.named(seed, "ayz")
    counter = _Counter()
    roots: set[int] = set()
    for i in range(trials):
        stats.trials_executed += 1
        r = rng.generator(rng.derive(base, i))
        coloring = [r.randint(1, k) for _ in range(d.n)]
        fams = _color_masks(tree, d, coloring, counter)
        roots.update(u for u, fam in enumerate(fams) if fam)
        if existence_only and roots:
            break
    stats.leaf_calls += counter.ops
    return roots or None
