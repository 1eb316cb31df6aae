"""Brute-force ground truth. Exponential; size guards are hard errors."""
from __future__ import annotations

import itertools
from typing import Iterator, Mapping

from .graph import Digraph, OutTree

__all__ = [
    "GuardError",
    "brute_embeddings",
    "brute_embed",
    "brute_colorful_sets",
    "brute_out_branchings",
    "brute_rooted_trees",
    "canonical_form",
    "is_embedding",
]


class GuardError(ValueError):
    pass


def _guard(name: str, value: int, limit: int) -> None:
    if value > limit:
        raise GuardError(f"{name}={value} exceeds the oracle limit {limit}")


def is_embedding(tree: OutTree, d: Digraph, phi: Mapping[int, int], restriction=None) -> bool:
    """Injective, arc-preserving, and consistent with the restriction."""
    if sorted(phi) != list(range(tree.k)):
        return False
    images = list(phi.values())
    if len(set(images)) != len(images) or not all(0 <= v < d.n for v in images):
        return False
    if any((phi[p], phi[c]) not in d.arcs for p, c in tree.arcs()):
        return False
    x = _restriction_sets(restriction)
    for u, xs in x.items():
        if phi[u] not in xs:
            return False
        if any(phi[v] in xs for v in phi if v != u):
            return False
    return True


def _restriction_sets(restriction) -> dict[int, frozenset]:
    if restriction is None:
        return {}
    x = getattr(restriction, "X", restriction)
    return {u: frozenset(xs) for u, xs in x.items()}


def brute_embeddings(
    tree: OutTree, d: Digraph, restriction=None, pins: Mapping[int, int] | None = None
) -> Iterator[dict[int, int]]:
    """Every injective arc-preserving map honoring the restriction and ``pins``."""
    x = _restriction_sets(restriction)
    owner: dict[int, int] = {}
    for u, xs in x.items():
        for v in xs:
            owner[v] = u
    pins = dict(pins or {})
    order = tree.bfs_order()

    def allowed(u: int, v: int) -> bool:
        if u in pins and pins[u] != v:
            return False
        o = owner.get(v)
        if u in x:
            return o == u
        return o is None

    phi: dict[int, int] = {}
    used: set[int] = set()

    def rec(i: int):
        if i == len(order):
            yield dict(sorted(phi.items()))
            return
        u = order[i]
        p = tree.parent[u]
        pool = range(d.n) if p is None else d.out_adj[phi[p]]
        for v in pool:
            if v in used or not allowed(u, v):
                continue
            phi[u] = v
            used.add(v)
            yield from rec(i + 1)
            used.discard(v)
            del phi[u]

    yield from rec(0)


def brute_embed(
    tree: OutTree,
    d: Digraph,
    restriction=None,
    target: int | None = None,
    *,
    max_k: int = 6,
    max_n: int = 12,
) -> dict[int, dict[int, int]]:
    """Map from each feasible image of ``target`` (default: root) to one witness copy."""
    _guard("k", tree.k, max_k)
    _guard("n", d.n, max_n)
    target = tree.root if target is None else target
    found: dict[int, dict[int, int]] = {}
    for w in range(d.n):
        for phi in brute_embeddings(tree, d, restriction, pins={target: w}):
            assert is_embedding(tree, d, phi, restriction)
            found[w] = phi
            break
    return found


def brute_colorful_sets(tree: OutTree, d: Digraph, coloring) -> list[set[frozenset]]:
    """Per digraph vertex: color sets of colorful copies with that vertex as root."""
    _guard("k", tree.k, 6)
    _guard("n", d.n, 8)
    out: list[set[frozenset]] = [set() for _ in range(d.n)]
    for phi in brute_embeddings(tree, d):
        colors = frozenset(coloring[v] for v in phi.values())
        if len(colors) == tree.k:
            out[phi[tree.root]].add(colors)
    return out


def brute_out_branchings(d: Digraph, max_n: int = 7) -> Iterator[list[tuple[int, int]]]:
    """Every spanning out-branching, each once, as a sorted arc list."""
    _guard("n", d.n, max_n)
    n = d.n
    if n == 0:
        return
    if n == 1:
        yield []
        return
    for root in range(n):
        others = [v for v in range(n) if v != root]
        choices = [d.in_adj[v] for v in others]
        if any(not c for c in choices):
            continue
        for parents in itertools.product(*choices):
            par = dict(zip(others, parents))
            if _reaches_all(root, par, n):
                yield sorted((p, v) for v, p in par.items())


def _reaches_all(root: int, par: dict[int, int], n: int) -> bool:
    children: dict[int, list[int]] = {}
    for v, p in par.items():
        children.setdefault(p, []).append(v)
    seen = {root}
    stack = [root]
    while stack:
        u = stack.pop()
        for c in children.get(u, ()):
            seen.add(c)
            stack.append(c)
    return len(seen) == n


def canonical_form(tree: OutTree, root: int | None = None) -> tuple:
    """Isomorphism-invariant encoding: sorted tuple of the children's encodings."""
    root = tree.root if root is None else root
    enc: dict[int, tuple] = {}
    order = [root]
    for u in order:
        order.extend(tree.children[u])
    for u in reversed(order):
        enc[u] = tuple(sorted(enc[c] for c in tree.children[u]))
    return enc[root]


def brute_rooted_trees(k: int) -> set[tuple]:
    """Canonical forms of all rooted trees on ``k`` vertices.

    Parent sequences with ``parent[i] < i`` already hit every isomorphism class.
    """
    _guard("k", k, 7)
    if k < 1:
        raise GuardError("k must be positive")
    forms = set()
    for tail in itertools.product(*(range(i) for i in range(1, k))):
        forms.add(canonical_form(OutTree.from_parents([None, *tail])))
    return forms
