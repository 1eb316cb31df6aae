"""Out-branchings and out-trees with at least k internal vertices.

Any out-tree with k or more internal vertices contains a minimal k-tree
rooted at the same vertex, and a digraph has an out-branching with k or more
internal vertices iff it has a minimal k-tree rooted in its unique source
component. So the search runs the tree detector once per minimal k-tree,
with the pattern root as target, and then grows the copy it finds into a
spanning out-branching.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from . import rng
from .engine import SolveStats, extract_embedding, solve_out_tree
from .graph import Digraph, OutTree, extend_to_out_branching, unique_source_scc
from .trees import enumerate_minimal_k_trees

__all__ = [
    "IOBResult",
    "minimal_trees_in_order",
    "solve_k_int_out_branching",
    "solve_k_int_out_tree",
]


@dataclass
class IOBResult:
    verdict: str  # "YES" or "NO"
    branching: list | None = None
    root: int | None = None
    witness_tree: tuple | None = None  # (minimal k-tree, embedding)
    stats: SolveStats = field(default_factory=SolveStats)

    @property
    def yes(self) -> bool:
        return self.verdict == "YES"


def minimal_trees_in_order(k: int) -> list[OutTree]:
    """Minimal k-trees by vertex count, then in enumeration order."""
    trees = list(enumerate_minimal_k_trees(k))
    return [t for _, t in sorted(enumerate(trees), key=lambda p: (p[1].k, p[0]))]


def _check_args(d: Digraph, k: int, mode: str, repetitions: int) -> None:
    if k < 1:
        raise ValueError("k must be at least 1")
    if d.n < 1:
        raise ValueError("the digraph needs at least one vertex")
    if mode not in ("det", "rand"):
        raise ValueError(f"unknown mode {mode!r}")
    if repetitions < 1:
        raise ValueError("repetitions must be at least 1")


def _search(d: Digraph, k: int, allowed, mode: str, seed: int, repetitions: int, stats: SolveStats):
    """First (tree, root) with a copy of a minimal k-tree rooted in ``allowed``."""
    reps = repetitions if mode == "rand" else 1
    for idx, tree in enumerate(minimal_trees_in_order(k)):
        if tree.k > d.n:
            break
        roots: set[int] = set()
        for rep in range(reps):
            report = solve_out_tree(tree, d, mode=mode, seed=rng.derive(seed, idx, rep))
            stats.merge(report.stats)
            roots |= report.root_images
            hits = roots if allowed is None else roots & allowed
            if hits:
                return tree, min(hits)
    return None


def solve_k_int_out_branching(
    d: Digraph, k: int, mode: str = "det", seed: int = 0, repetitions: int = 1
) -> IOBResult:
    """Decide whether ``d`` has a spanning out-branching with at least ``k`` internal vertices.

    In ``rand`` mode every per-tree call is repeated up to ``repetitions``
    times; a NO there may be wrong, a YES never is. Witness copies are
    always extracted deterministically.
    """
    _check_args(d, k, mode, repetitions)
    stats = SolveStats()
    if k > d.n - 1:
        return IOBResult("NO", stats=stats)
    source = unique_source_scc(d)
    if source is None:
        return IOBResult("NO", stats=stats)
    found = _search(d, k, set(source), mode, seed, repetitions, stats)
    if found is None:
        return IOBResult("NO", stats=stats)
    tree, root = found
    phi = extract_embedding(tree, d, tree.root, root, mode="det")
    tree_arcs = [(phi[p], phi[c]) for p, c in tree.arcs()]
    branching = extend_to_out_branching(d, tree_arcs, root)
    return IOBResult("YES", branching, root, (tree, phi), stats)


def solve_k_int_out_tree(
    d: Digraph, k: int, mode: str = "det", seed: int = 0, repetitions: int = 1
) -> IOBResult:
    """Decide whether ``d`` contains an out-tree with at least ``k`` internal vertices."""
    _check_args(d, k, mode, repetitions)
    stats = SolveStats()
    if k > d.n - 1:
        return IOBResult("NO", stats=stats)
    found = _search(d, k, None, mode, seed, repetitions, stats)
    if found is None:
        return IOBResult("NO", stats=stats)
    tree, root = found
    phi = extract_embedding(tree, d, tree.root, root, mode="det")
    return IOBResult("YES", None, root, (tree, phi), stats)

