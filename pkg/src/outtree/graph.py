"""Digraphs, out-trees, their text formats, and source-component rooting.

Vertices are dense 0-based integers. Both :class:`Digraph` and
:class:`OutTree` are immutable once built.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import networkx as nx

__all__ = [
    "ParseError",
    "Digraph",
    "OutTree",
    "parse_digraph",
    "parse_out_tree",
    "format_digraph",
    "format_out_tree",
    "neighborhoods",
    "unique_source_scc",
    "extend_to_out_branching",
    "is_out_branching",
    "internal_count",
]


class ParseError(ValueError):
    """Malformed graph or tree input. ``line`` is 1-based when known."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


def _mask(vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


@dataclass(frozen=True)
class Digraph:
    """Simple digraph on ``range(n)``; no loops, no parallel arcs."""

    n: int
    arcs: frozenset
    out_adj: tuple = field(repr=False, compare=False)
    in_adj: tuple = field(repr=False, compare=False)
    # bitmask views used by the solvers
    out_mask: tuple = field(repr=False, compare=False)
    in_mask: tuple = field(repr=False, compare=False)

    @classmethod
    def from_arcs(cls, n: int, arcs: Iterable[tuple[int, int]]) -> "Digraph":
        if n < 0:
            raise ValueError("vertex count must be nonnegative")
        out_adj: list[list[int]] = [[] for _ in range(n)]
        in_adj: list[list[int]] = [[] for _ in range(n)]
        seen = set()
        for u, v in arcs:
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"arc ({u}, {v}) out of range for n={n}")
            if u == v:
                raise ValueError(f"self-loop at {u}")
            if (u, v) in seen:
                raise ValueError(f"duplicate arc ({u}, {v})")
            seen.add((u, v))
            out_adj[u].append(v)
            in_adj[v].append(u)
        out_t = tuple(tuple(sorted(a)) for a in out_adj)
        in_t = tuple(tuple(sorted(a)) for a in in_adj)
        return cls(
            n=n,
            arcs=frozenset(seen),
            out_adj=out_t,
            in_adj=in_t,
            out_mask=tuple(_mask(a) for a in out_t),
            in_mask=tuple(_mask(a) for a in in_t),
        )

    @property
    def m(self) -> int:
        return len(self.arcs)

    @property
    def all_mask(self) -> int:
        return (1 << self.n) - 1

    def sorted_arcs(self) -> list[tuple[int, int]]:
        return sorted(self.arcs)

    def has_arc(self, u: int, v: int) -> bool:
        return (u, v) in self.arcs

    def to_networkx(self) -> nx.DiGraph:
        g = nx.DiGraph()
        g.add_nodes_from(range(self.n))
        g.add_edges_from(self.arcs)
        return g


@dataclass(frozen=True)
class OutTree:
    """Rooted tree given by a parent sequence (``None`` marks the root)."""

    parent: tuple
    children: tuple = field(repr=False, compare=False)
    root: int = field(compare=False)

    @classmethod
    def from_parents(cls, parent: Sequence[int | None]) -> "OutTree":
        parent = tuple(None if p is None or p < 0 else int(p) for p in parent)
        k = len(parent)
        if k == 0:
            raise ValueError("an out-tree needs at least one vertex")
        roots = [i for i, p in enumerate(parent) if p is None]
        if len(roots) != 1:
            raise ValueError(f"expected exactly one root, found {len(roots)}")
        children: list[list[int]] = [[] for _ in range(k)]
        for i, p in enumerate(parent):
            if p is None:
                continue
            if not 0 <= p < k:
                raise ValueError(f"parent {p} of vertex {i} out of range")
            if p == i:
                raise ValueError(f"vertex {i} is its own parent")
            children[p].append(i)
        root = roots[0]
        # connectivity from the root rules out cycles in the parent relation
        reached = 0
        stack = [root]
        while stack:
            u = stack.pop()
            reached += 1
            stack.extend(children[u])
        if reached != k:
            raise ValueError("parent relation contains a cycle")
        return cls(parent=parent, children=tuple(tuple(c) for c in children), root=root)

    @classmethod
    def from_arcs(cls, k: int, arcs: Iterable[tuple[int, int]]) -> "OutTree":
        parent: list[int | None] = [None] * k
        for u, v in arcs:
            if parent[v] is not None:
                raise ValueError(f"vertex {v} has two parents")
            parent[v] = u
        return cls.from_parents(parent)

    @property
    def k(self) -> int:
        return len(self.parent)

    def __len__(self) -> int:
        return len(self.parent)

    @property
    def leaves(self) -> frozenset:
        return frozenset(i for i, c in enumerate(self.children) if not c)

    @property
    def internal(self) -> frozenset:
        return frozenset(i for i, c in enumerate(self.children) if c)

    def arcs(self) -> list[tuple[int, int]]:
        return [(p, i) for i, p in enumerate(self.parent) if p is not None]

    def bfs_order(self) -> list[int]:
        order = [self.root]
        for u in order:
            order.extend(self.children[u])
        return order

    def postorder(self) -> list[int]:
        return self.bfs_order()[::-1]


def _as_text(data) -> str:
    if isinstance(data, (bytes, bytearray)):
        return data.decode("ascii")
    return data


def _ints(tokens: list[str], lineno: int) -> list[int]:
    try:
        return [int(t) for t in tokens]
    except ValueError:
        raise ParseError(f"non-integer token in {' '.join(tokens)!r}", lineno) from None


def parse_digraph(text) -> Digraph:
    """Parse ``n m`` followed by ``m`` lines ``u v``."""
    lines = _as_text(text).split("\n")
    # tolerate one trailing newline and nothing else
    while lines and lines[-1].strip() == "":
        lines.pop()
    if not lines:
        raise ParseError("empty input", 1)
    header = lines[0].split()
    if len(header) != 2:
        raise ParseError("header must be 'n m'", 1)
    n, m = _ints(header, 1)
    if n < 0 or m < 0:
        raise ParseError("negative header value", 1)
    if len(lines) - 1 != m:
        raise ParseError(f"expected {m} arc lines, found {len(lines) - 1}", len(lines))
    arcs = []
    seen = set()
    for lineno, line in enumerate(lines[1:], start=2):
        tokens = line.split()
        if len(tokens) != 2:
            raise ParseError("arc line must be 'u v'", lineno)
        u, v = _ints(tokens, lineno)
        if not (0 <= u < n and 0 <= v < n):
            raise ParseError(f"vertex index out of range in arc ({u}, {v})", lineno)
        if u == v:
            raise ParseError(f"self-loop at vertex {u}", lineno)
        if (u, v) in seen:
            raise ParseError(f"duplicate arc ({u}, {v})", lineno)
        seen.add((u, v))
        arcs.append((u, v))
    return Digraph.from_arcs(n, arcs)


def parse_out_tree(text) -> OutTree:
    """Parse one line of parent indices with ``-1`` for the root."""
    lines = [ln for ln in _as_text(text).split("\n") if ln.strip()]
    if len(lines) != 1:
        raise ParseError("tree file must hold exactly one non-empty line", 1)
    tokens = lines[0].split()
    values = _ints(tokens, 1)
    k = len(values)
    for i, p in enumerate(values):
        if p != -1 and not 0 <= p < k:
            raise ParseError(f"parent index {p} of vertex {i} out of range", 1)
    try:
        return OutTree.from_parents([None if p == -1 else p for p in values])
    except ValueError as exc:
        raise ParseError(str(exc), 1) from None


def format_digraph(d: Digraph) -> str:
    lines = [f"{d.n} {d.m}"]
    lines.extend(f"{u} {v}" for u, v in d.sorted_arcs())
    return "\n".join(lines) + "\n"


def format_out_tree(t: OutTree) -> str:
    return " ".join("-1" if p is None else str(p) for p in t.parent) + "\n"


def neighborhoods(d: Digraph, xs: Iterable[int], direction: str = "out") -> set[int]:
    """Union of out- (``"out"``) or in-neighbors (``"in"``) over ``xs``."""
    if direction not in ("out", "in"):
        raise ValueError("direction must be 'out' or 'in'")
    adj = d.out_adj if direction == "out" else d.in_adj
    result: set[int] = set()
    for x in xs:
        result.update(adj[x])
    return result


def unique_source_scc(d: Digraph) -> frozenset | None:
    """Vertex set of the unique strong component without entering arcs.

    Returns ``None`` when the condensation has two or more sources (or the
    graph is empty). Linear in n + m.
    """
    if d.n == 0:
        return None
    g = d.to_networkx()
    cond = nx.condensation(g)
    sources = [c for c in cond.nodes if cond.in_degree(c) == 0]
    if len(sources) != 1:
        return None
    return frozenset(cond.nodes[sources[0]]["members"])


def extend_to_out_branching(
    d: Digraph, tree_arcs: Iterable[tuple[int, int]], root: int
) -> list[tuple[int, int]]:
    """Grow an embedded out-tree into a spanning out-branching by BFS.

    The search starts from every vertex already on the tree, so every
    original arc is kept and every added vertex hangs below the tree.
    Raises ``ValueError`` if some vertex cannot be reached.
    """
    tree_arcs = sorted(set(tree_arcs))
    on_tree = {root}
    for u, v in tree_arcs:
        if (u, v) not in d.arcs:
            raise ValueError(f"tree arc ({u}, {v}) is not an arc of the digraph")
        on_tree.add(u)
        on_tree.add(v)
    result = list(tree_arcs)
    queue = deque(sorted(on_tree))
    while queue:
        u = queue.popleft()
        for v in d.out_adj[u]:
            if v not in on_tree:
                on_tree.add(v)
                result.append((u, v))
                queue.append(v)
    if len(on_tree) != d.n:
        missing = sorted(set(range(d.n)) - on_tree)
        raise ValueError(f"vertices unreachable from the tree: {missing}")
    return result


def is_out_branching(n: int, arcs: Iterable[tuple[int, int]], root: int | None = None) -> bool:
    """True iff ``arcs`` form a spanning out-tree on ``range(n)``."""
    arcs = list(arcs)
    if len(arcs) != n - 1:
        return False
    parent: list[int | None] = [None] * n
    for u, v in arcs:
        if parent[v] is not None:
            return False
        parent[v] = u
    roots = [v for v in range(n) if parent[v] is None]
    if len(roots) != 1 or (root is not None and roots[0] != root):
        return False
    try:
        OutTree.from_parents(parent)
    except ValueError:
        return False
    return True


def internal_count(arcs: Iterable[tuple[int, int]]) -> int:
    return len({u for u, _ in arcs})
