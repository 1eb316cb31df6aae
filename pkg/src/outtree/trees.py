"""Rooted-tree enumeration and minimal k-internal out-trees.

Rooted trees are generated as canonical level sequences with the
Beyer-Hedetniemi successor rule, starting from the path and ending at the
star. Hanging one new leaf below every leaf of a k-vertex tree yields a
minimal k-tree; every minimal k-tree arises this way exactly once.
"""
from __future__ import annotations

from collections import Counter
from typing import Iterator, Sequence

from .graph import OutTree

__all__ = [
    "MAX_ENUM_K",
    "MAX_MINIMAL_K",
    "levels_to_tree",
    "tree_to_levels",
    "level_sequences",
    "enumerate_rooted_trees",
    "gmt_expand",
    "is_minimal_k_tree",
    "count_trees_by_leaves",
    "enumerate_minimal_k_trees",
]

MAX_ENUM_K = 16
MAX_MINIMAL_K = 10


def levels_to_tree(levels: Sequence[int]) -> OutTree:
    """Pre-order level sequence (root at level 1) to a parent array."""
    parent: list[int | None] = [None] * len(levels)
    last_at: dict[int, int] = {}
    for i, lev in enumerate(levels):
        if i:
            parent[i] = last_at[lev - 1]
        last_at[lev] = i
    return OutTree.from_parents(parent)


def tree_to_levels(tree: OutTree) -> list[int]:
    """Canonical (lexicographically largest) level sequence of ``tree``."""

    def seq(u: int, depth: int) -> list[int]:
        subs = sorted((seq(c, depth + 1) for c in tree.children[u]), reverse=True)
        out = [depth]
        for s in subs:
            out.extend(s)
        return out

    return seq(tree.root, 1)


def level_sequences(k: int) -> Iterator[tuple[int, ...]]:
    """Canonical level sequences of all rooted trees on ``k`` vertices.

    Each step rewrites only the suffix after the last entry above level 2;
    ``p`` is tracked across steps instead of being searched for.
    """
    if not 1 <= k <= MAX_ENUM_K:
        raise ValueError(f"k must lie in [1, {MAX_ENUM_K}], got {k}")
    lev = list(range(1, k + 1))
    p = k - 1  # last index with lev[p] > 2, or < 1 once we reach the star
    while True:
        yield tuple(lev)
        while p >= 1 and lev[p] <= 2:
            p -= 1
        if p < 1:
            return
        q = p - 1
        while lev[q] != lev[p] - 1:
            q -= 1
        shift = p - q
        for i in range(p, k):
            lev[i] = lev[i - shift]
        # the copied block may push p further right
        j = k - 1
        while j > p and lev[j] <= 2:
            j -= 1
        p = j


def enumerate_rooted_trees(k: int) -> Iterator[OutTree]:
    for levels in level_sequences(k):
        yield levels_to_tree(levels)


def gmt_expand(tree: OutTree) -> OutTree:
    """Append a single new child below every leaf of ``tree``."""
    parent = list(tree.parent)
    for leaf in sorted(tree.leaves):
        parent.append(leaf)
    return OutTree.from_parents(parent)


def is_minimal_k_tree(tree: OutTree, k: int) -> bool:
    if len(tree.internal) != k:
        return False
    for leaf in tree.leaves:
        p = tree.parent[leaf]
        if p is not None and len(tree.children[p]) != 1:
            return False
    return True


def count_trees_by_leaves(k: int) -> dict[int, int]:
    counts = Counter(len(t.leaves) for t in enumerate_rooted_trees(k))
    return dict(sorted(counts.items()))


def enumerate_minimal_k_trees(k: int) -> Iterator[OutTree]:
    if not 1 <= k <= MAX_MINIMAL_K:
        raise ValueError(f"k must lie in [1, {MAX_MINIMAL_K}], got {k}")
    for t0 in enumerate_rooted_trees(k):
        yield gmt_expand(t0)
