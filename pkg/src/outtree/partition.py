"""Balanced splitting of a pattern tree.

Three pieces feed the recursive solver:

* :func:`greedy_bipartition` -- greedy two-way split of weighted items,
* :func:`find_balanced_splitter` -- a vertex whose removal leaves no
  component heavier than half the total weight,
* :func:`tree_bipartition` / :func:`make_split_plan` -- grouping the
  components around the splitting vertex into a white and a black side.

Trees in the solver are sub-trees of one pattern, so every function here
accepts an optional ``vertices`` subset of the pattern's vertex ids. Weights
are 0 for restricted vertices and 1 otherwise.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from .graph import OutTree

__all__ = [
    "ALPHA_STAR",
    "SplitPlan",
    "greedy_bipartition",
    "find_balanced_splitter",
    "components_around",
    "tree_bipartition",
    "make_split_plan",
    "below_alpha_star",
]

ALPHA_STAR = (3 - math.sqrt(5)) / 2


def below_alpha_star(alpha: Fraction) -> bool:
    """Exact test for alpha < (3 - sqrt 5)/2, i.e. alpha^2 - 3 alpha + 1 > 0."""
    return alpha * alpha - 3 * alpha + 1 > 0 and alpha < Fraction(3, 2)


def greedy_bipartition(
    weights: Mapping[int, int], trace: list | None = None
) -> tuple[set[int], set[int]]:
    """Split item ids into ``(A, B)`` so that no single move lowers |n(A) - n(B)|.

    Starts from ``A = {}`` and, while ``n(A) < n(B)``, moves the heaviest
    item of ``B`` with ``0 < n_i < d(A, B)`` into ``A`` (smallest id on
    ties). If ``trace`` is given, the value of ``d`` before the first move
    and after every move is appended to it.
    """
    for i, w in weights.items():
        if w < 0:
            raise ValueError(f"negative weight {w} for item {i}")
    # heaviest first, then smallest id; d only decreases, so a single
    # forward scan over this order finds every admissible move
    order = sorted(weights, key=lambda i: (-weights[i], i))
    a: set[int] = set()
    b: set[int] = set(weights)
    na, nb = 0, sum(weights.values())
    if trace is not None:
        trace.append(abs(na - nb))
    pos = 0
    while na < nb:
        d = nb - na
        while pos < len(order) and not (0 < weights[order[pos]] < d):
            if weights[order[pos]] == 0:
                pos = len(order)
                break
            pos += 1
        if pos >= len(order):
            break
        i = order[pos]
        pos += 1
        a.add(i)
        b.discard(i)
        na += weights[i]
        nb -= weights[i]
        if trace is not None:
            trace.append(abs(na - nb))
    return a, b


def _adjacency(tree: OutTree, vertices: frozenset) -> dict[int, list[int]]:
    adj: dict[int, list[int]] = {v: [] for v in vertices}
    for v in vertices:
        p = tree.parent[v]
        if p is not None and p in vertices:
            adj[v].append(p)
            adj[p].append(v)
    return adj


def _vertex_set(tree: OutTree, vertices: Iterable[int] | None) -> frozenset:
    return frozenset(range(tree.k)) if vertices is None else frozenset(vertices)


def components_around(
    tree: OutTree, v_star: int, vertices: Iterable[int] | None = None
) -> dict[int, frozenset]:
    """Components of ``tree[vertices] - v_star`` keyed by their vertex adjacent to ``v_star``."""
    vs = _vertex_set(tree, vertices)
    adj = _adjacency(tree, vs)
    comps: dict[int, frozenset] = {}
    for x in sorted(adj[v_star]):
        seen = {x}
        stack = [x]
        while stack:
            u = stack.pop()
            for y in adj[u]:
                if y != v_star and y not in seen:
                    seen.add(y)
                    stack.append(y)
        comps[x] = frozenset(seen)
    return comps


def find_balanced_splitter(
    tree: OutTree, weights: Mapping[int, int] | list, vertices: Iterable[int] | None = None
) -> int:
    """Smallest-id vertex whose removal leaves components of weight <= w(T)/2."""
    vs = _vertex_set(tree, vertices)
    total = sum(weights[v] for v in vs)
    if total < 1:
        raise ValueError("total weight must be positive")
    adj = _adjacency(tree, vs)
    # subtree weights with respect to an arbitrary root of the sub-tree
    start = min(vs)
    order = [start]
    up: dict[int, int | None] = {start: None}
    for u in order:
        for y in adj[u]:
            if y != up[u]:
                up[y] = u
                order.append(y)
    below = {v: weights[v] for v in vs}
    for u in reversed(order):
        if up[u] is not None:
            below[up[u]] += below[u]
    for v in sorted(vs):
        heaviest = total - below[v]
        for y in adj[v]:
            if y != up[v]:
                heaviest = max(heaviest, below[y])
        if 2 * heaviest <= total:
            return v
    raise AssertionError("no balanced splitter; weights inconsistent")  # pragma: no cover


def tree_bipartition(
    tree: OutTree,
    t: int,
    v_star: int,
    restricted: Iterable[int] = (),
    vertices: Iterable[int] | None = None,
) -> tuple[set[int], set[int]]:
    """Group the components around ``v_star`` into ``(WH, BL)``.

    Components are identified by their vertex adjacent to ``v_star``. When
    ``t != v_star`` the component holding ``t`` always ends up in ``BL``.
    """
    vs = _vertex_set(tree, vertices)
    restricted = frozenset(restricted)
    comps = components_around(tree, v_star, vs)
    cw = {x: len(c - restricted) for x, c in comps.items()}
    w_star = 0 if v_star in restricted else 1

    if v_star == t:
        a, b = greedy_bipartition(cw)
        na = sum(cw[i] for i in a)
        nb = sum(cw[i] for i in b)
        return (a, b) if na <= nb else (b, a)

    l = next(x for x, c in comps.items() if t in c)
    if cw[l] - w_star >= 0:
        shifted = dict(cw)
        shifted[l] = cw[l] - w_star
        a, b = greedy_bipartition(shifted)
        return (a, b) if l in b else (b, a)

    # t's component weighs 0 while v_star weighs 1: v_star takes part in the
    # split as a pseudo-item and t's component joins the other side
    items = {x: w for x, w in cw.items() if x != l}
    items[v_star] = w_star
    a, b = greedy_bipartition(items)
    if v_star in a:
        return a - {v_star}, b | {l}
    return b - {v_star}, a | {l}


@dataclass(frozen=True)
class SplitPlan:
    v_star: int
    WH: frozenset
    BL: frozenset
    U_w: frozenset
    U_b: frozenset
    w_w: int
    w_b: int
    alpha: Fraction
    v_w: int | None
    v_b: int | None
    criterion: str  # "found" or "taken-over"
    rejected: int | None = None  # handed-down splitter that failed to split

    @property
    def weight(self) -> int:
        return self.w_w + self.w_b

    @property
    def white_probability(self) -> Fraction:
        return self.alpha if self.w_w <= self.w_b else 1 - self.alpha

    def describe(self) -> str:
        def fmt(xs):
            return "{" + ",".join(str(x) for x in sorted(xs)) + "}"

        opt = lambda v: "-" if v is None else str(v)  # noqa: E731
        return "\n".join(
            [
                f"v_star: {self.v_star} ({self.criterion})"
                + ("" if self.rejected is None else f" rejected={self.rejected}"),
                f"WH: {fmt(self.WH)}",
                f"BL: {fmt(self.BL)}",
                f"U_w: {fmt(self.U_w)} weight={self.w_w}",
                f"U_b: {fmt(self.U_b)} weight={self.w_b}",
                f"alpha: {self.alpha} ({float(self.alpha):.6f})",
                f"v_w: {opt(self.v_w)}",
                f"v_b: {opt(self.v_b)}",
            ]
        )


def make_split_plan(
    tree: OutTree,
    t: int,
    restricted: Iterable[int] = (),
    predetermined: int | None = None,
    vertices: Iterable[int] | None = None,
) -> SplitPlan:
    vs = _vertex_set(tree, vertices)
    restricted = frozenset(restricted) & vs
    weights = {v: (0 if v in restricted else 1) for v in vs}
    total = len(vs) - len(restricted)
    if total < 2:
        raise ValueError("a split needs at least two unrestricted vertices")
    rejected = None
    if predetermined is None:
        v_star = find_balanced_splitter(tree, weights, vs)
        criterion = "found"
    else:
        v_star = predetermined
        criterion = "taken-over"
    u_w, u_b, wh, bl = _sides(tree, t, v_star, restricted, vs)
    w_w = sum(weights[v] for v in u_w)
    w_b = sum(weights[v] for v in u_b)
    if w_w == 0 or w_b == 0:
        # a splitter handed down twice in a row can fail to split small
        # trees; without a fresh splitter the weight would never shrink
        assert criterion == "taken-over", "balanced splitter produced an empty side"
        rejected = v_star
        v_star = find_balanced_splitter(tree, weights, vs)
        criterion = "found"
        u_w, u_b, wh, bl = _sides(tree, t, v_star, restricted, vs)
        w_w = sum(weights[v] for v in u_w)
        w_b = sum(weights[v] for v in u_b)
    alpha = Fraction(min(w_w, w_b), total)
    v_w = v_b = None
    if below_alpha_star(alpha):
        assert w_w != w_b
        if w_w < w_b:
            v_b = v_star
        else:
            v_w = v_star
    return SplitPlan(
        v_star=v_star,
        WH=frozenset(wh),
        BL=frozenset(bl),
        U_w=u_w,
        U_b=u_b,
        w_w=w_w,
        w_b=w_b,
        alpha=alpha,
        v_w=v_w,
        v_b=v_b,
        criterion=criterion,
        rejected=rejected,
    )


def _sides(tree, t, v_star, restricted, vs):
    wh, bl = tree_bipartition(tree, t, v_star, restricted, vs)
    comps = components_around(tree, v_star, vs)
    u_w = frozenset({v_star}).union(*(comps[i] for i in wh))
    u_b = frozenset().union(*(comps[i] for i in bl))
    return u_w, u_b, wh, bl
