"""Asymmetric divide-and-color search for a pattern out-tree in a digraph.

:func:`find_tree` returns the set ``X_t`` of digraph vertices that can play
the role of pattern vertex ``t`` in a copy of the pattern meeting the given
restrictions. Every returned vertex is backed by a real copy; with a
randomized coloring source a feasible vertex is missed with probability
below ``1/e`` per top-level call, with a universal-family source never.

Vertex sets inside the recursion are Python ints used as bitmasks, over
pattern ids for sub-trees and over digraph ids for sub-digraphs. Induced
sub-digraphs keep the original vertex ids.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

from . import rng
from .graph import Digraph, OutTree
from .partition import ALPHA_STAR, SplitPlan, below_alpha_star, make_split_plan

__all__ = [
    "ALPHA_STAR",
    "LOOP_NUMERATOR",
    "RHO_BOUND",
    "C_BOUND",
    "Restriction",
    "SolveStats",
    "SolveReport",
    "RandomColoring",
    "FamilyColoring",
    "iteration_count",
    "color_vertices",
    "find_tree",
    "base_case_solve",
    "solve_out_tree",
    "extract_embedding",
    "EmbeddingError",
]

LOOP_NUMERATOR = 2.51
RHO_BOUND = 3.724
C_BOUND = 5.704
ITERATION_CAP = 1 << 62


def _bits(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def _to_mask(vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


class EmbeddingError(RuntimeError):
    pass


@dataclass(frozen=True)
class Restriction:
    """Pinned pattern vertices and their pairwise-disjoint candidate sets."""

    X: Mapping[int, frozenset] = field(default_factory=dict)

    def __post_init__(self):
        fixed = {u: frozenset(xs) for u, xs in dict(self.X).items()}
        seen: set[int] = set()
        for u, xs in fixed.items():
            if not xs:
                raise ValueError(f"empty candidate set for pattern vertex {u}")
            if seen & xs:
                raise ValueError("candidate sets must be pairwise disjoint")
            seen |= xs
        object.__setattr__(self, "X", fixed)

    @property
    def L(self) -> frozenset:
        return frozenset(self.X)

    def masks(self) -> dict[int, int]:
        return {u: _to_mask(xs) for u, xs in self.X.items()}

    def with_pin(self, u: int, vertices: Iterable[int]) -> "Restriction":
        x = dict(self.X)
        x[u] = frozenset(vertices)
        return Restriction(x)


@dataclass
class SolveStats:
    leaf_calls: int = 0
    recursive_calls: int = 0
    trials_executed: int = 0
    max_depth: int = 0
    pruned_calls: int = 0
    cache_hits: int = 0
    rebalance_misses: int = 0
    takeover_misses: int = 0

    def merge(self, other: "SolveStats") -> None:
        self.leaf_calls += other.leaf_calls
        self.recursive_calls += other.recursive_calls
        self.trials_executed += other.trials_executed
        self.max_depth = max(self.max_depth, other.max_depth)
        self.pruned_calls += other.pruned_calls
        self.cache_hits += other.cache_hits
        self.rebalance_misses += other.rebalance_misses
        self.takeover_misses += other.takeover_misses


@dataclass(frozen=True)
class SolveReport:
    root_images: frozenset
    stats: SolveStats
    mode: str
    seed: int | None = None

    @property
    def found(self) -> bool:
        return bool(self.root_images)


def iteration_count(alpha, k: int) -> int:
    """Number of colorings tried for a split with lighter-side share ``alpha``.

    Exact ceiling of ``2.51 / (alpha^(alpha k) (1 - alpha)^((1 - alpha) k))``,
    evaluated in log space and rounded to 12 significant digits first so
    that values like 10.04 are not pushed over an integer by rounding noise.
    """
    a = float(alpha)
    if not 0 < a <= 0.5:
        raise ValueError(f"alpha must lie in (0, 1/2], got {alpha}")
    if k < 0:
        raise ValueError("k must be nonnegative")
    log_q = math.log(LOOP_NUMERATOR) - k * (a * math.log(a) + (1 - a) * math.log1p(-a))
    if log_q > math.log(ITERATION_CAP):
        raise OverflowError(f"iteration count exceeds 2^62 for alpha={alpha}, k={k}")
    q = float(f"{math.exp(log_q):.12g}")
    count = math.ceil(q)
    if count > ITERATION_CAP:
        raise OverflowError(f"iteration count exceeds 2^62 for alpha={alpha}, k={k}")
    return count


_WHITE_LABEL = rng.splitmix64(0)
_BLACK_LABEL = rng.splitmix64(1)
_COIN_LABEL = rng.splitmix64(2)


_index_mix: list[int] = []


def _index_labels(count: int) -> list[int]:
    """``splitmix64(i)`` for ``i < count``, grown on demand."""
    while len(_index_mix) < count:
        _index_mix.append(rng.splitmix64(len(_index_mix)))
    return _index_mix


def trial_keys(key: int, index: int) -> tuple[int, int, int]:
    """Stream keys of iteration ``index``: coin flips, white call, black call."""
    trial = rng.derive(key, index)
    return (
        rng.splitmix64(trial ^ _COIN_LABEL),
        rng.splitmix64(trial ^ _WHITE_LABEL),
        rng.splitmix64(trial ^ _BLACK_LABEL),
    )


class RandomColoring:
    """Independent white/black coin flips with the split's white probability."""

    mode = "randomized"

    def __init__(self, seed: int = 0):
        self.seed = seed
        self.root_key = rng.named(seed, "find-tree")

    def count(self, plan: SplitPlan) -> int:
        return iteration_count(plan.alpha, plan.weight)

    def param(self, plan: SplitPlan) -> int:
        return rng.threshold(float(plan.white_probability))

    def draw_with(self, unfixed: int, param: int, coin_key: int, index: int) -> int:
        return rng.bernoulli_mask(coin_key, unfixed, param)

    def draw(self, unfixed: int, plan: SplitPlan, key: int, index: int) -> int:
        return self.draw_with(unfixed, self.param(plan), trial_keys(key, index)[0], index)


class FamilyColoring:
    """One coloring per member of an (n, k)-universal binary family.

    ``f(i) = 0`` paints vertex ``i`` white, ``f(i) = 1`` black.
    """

    mode = "deterministic"

    def __init__(self, family):
        self.family = family
        self.seed = None
        self.root_key = 0
        self._black = family.masks()

    def count(self, plan: SplitPlan) -> int:
        return len(self._black)

    def param(self, plan: SplitPlan) -> None:
        return None

    def draw_with(self, unfixed: int, param, coin_key: int, index: int) -> int:
        return unfixed & ~self._black[index]

    def draw(self, unfixed: int, plan: SplitPlan, key: int, index: int) -> int:
        return unfixed & ~self._black[index]


def color_vertices(
    d: Digraph,
    plan: SplitPlan,
    restriction: Restriction,
    source,
    vertices: Iterable[int] | None = None,
    key: int = 0,
    index: int = 0,
) -> dict[int, str]:
    """Color the vertices of ``d[vertices]`` for one iteration of a split.

    Candidate sets of restricted pattern vertices are forced to the side of
    their pattern vertex; the rest comes from ``source``.
    """
    vmask = d.all_mask if vertices is None else _to_mask(vertices)
    white_fixed = black_fixed = 0
    for u, xs in restriction.masks().items():
        if u in plan.U_w:
            white_fixed |= xs
        else:
            black_fixed |= xs
    unfixed = vmask & ~(white_fixed | black_fixed)
    white = white_fixed | source.draw(unfixed, plan, key, index)
    return {v: ("white" if white >> v & 1 else "black") for v in _bits(vmask)}


class _Search:
    def __init__(self, tree: OutTree, d: Digraph, source, stats: SolveStats, *, prune=True, check=True):
        self.tree = tree
        self.d = d
        self.source = source
        self.stats = stats
        self.prune = prune
        self.check = check
        self.in_mask = d.in_mask
        self.out_mask = d.out_mask
        self.sweeps: dict = {}
        self.plans: dict = {}
        # only a deterministic source makes results a function of the arguments
        self.memo: dict | None = (
            {} if source is not None and source.mode == "deterministic" else None
        )
        self.early_exit = False

    def plan(self, umask: int, t: int, lmask: int, pred: int | None) -> SplitPlan:
        return self.compiled(umask, t, lmask, pred)[0]

    def compiled(self, umask: int, t: int, lmask: int, pred: int | None) -> tuple:
        """Split plan plus everything the iteration loop needs from it."""
        key = (umask, t, lmask, pred)
        entry = self.plans.get(key)
        if entry is None:
            plan = make_split_plan(self.tree, t, _bits(lmask), pred, _bits(umask))
            if self.check:
                self._check_plan(plan)
            floor_w = floor_b = None
            if plan.criterion == "found" and plan.weight >= 5 and below_alpha_star(plan.alpha):
                bound = (1 - 2 * plan.alpha) / (1 - plan.alpha)
                if plan.v_w is not None:
                    floor_w = bound
                else:
                    floor_b = bound
            source = self.source
            entry = (
                plan,
                source.count(plan),
                source.param(plan),
                _to_mask(plan.U_w),
                _to_mask(plan.U_b) | (1 << plan.v_star),
                floor_w,
                floor_b,
            )
            self.plans[key] = entry
        return entry

    def run(self, umask, vmask, pred, t, restr, key, depth=0, floor=None) -> int:
        memo_key = None
        if self.memo is not None:
            memo_key = (umask, vmask, pred, t, frozenset(restr.items()))
            hit = self.memo.get(memo_key)
            if hit is not None:
                self.stats.cache_hits += 1
                return hit
        result = self._run(umask, vmask, pred, t, restr, key, depth, floor)
        if memo_key is not None:
            self.memo[memo_key] = result
        return result

    def _run(self, umask, vmask, pred, t, restr, key, depth, floor) -> int:
        stats = self.stats
        if depth > stats.max_depth:
            stats.max_depth = depth
        lmask = 0
        fixed = 0
        for u, xs in restr.items():
            lmask |= 1 << u
            if self.check:
                assert xs and not (fixed & xs), "candidate sets must be nonempty and disjoint"
                assert not (xs & ~vmask), "candidate set outside the current digraph"
            fixed |= xs
        free = umask & ~lmask
        weight = free.bit_count()
        unfixed = vmask & ~fixed
        if self.prune and unfixed.bit_count() < weight:
            # fewer unrestricted digraph vertices than unrestricted pattern vertices
            stats.pruned_calls += 1
            return 0
        if weight <= 1:
            return self.base_case(umask, vmask, t, restr, free, fixed)

        stats.recursive_calls += 1
        plan, count, param, uw_mask, ub_mask, floor_w, floor_b = self.compiled(umask, t, lmask, pred)
        if floor is not None and plan.alpha < floor:
            stats.rebalance_misses += 1
        if plan.criterion == "taken-over" and plan.weight >= 5 and below_alpha_star(plan.alpha):
            stats.takeover_misses += 1
        white_fixed = black_fixed = 0
        r_w = {}
        r_b = {}
        for u, xs in restr.items():
            if uw_mask >> u & 1:
                white_fixed |= xs
                r_w[u] = xs
            else:
                black_fixed |= xs
                r_b[u] = xs
        v_star, v_w, v_b = plan.v_star, plan.v_w, plan.v_b
        x_t = 0
        draw = self.source.draw_with
        run = self.run
        early = self.early_exit and depth == 0
        labels = _index_labels(count)
        mix = rng.splitmix64
        for i in range(count):
            stats.trials_executed += 1
            # same keys as trial_keys(key, i), the black one only when needed
            trial = mix(key ^ labels[i])
            white = draw(unfixed, param, mix(trial ^ _COIN_LABEL), i)
            s = run(uw_mask, white_fixed | white, v_w, v_star, r_w, mix(trial ^ _WHITE_LABEL), depth + 1, floor_w)
            if s:
                rb = dict(r_b)
                rb[v_star] = s
                x_t |= run(
                    ub_mask, black_fixed | (unfixed & ~white) | s, v_b, t, rb,
                    mix(trial ^ _BLACK_LABEL), depth + 1, floor_b,
                )
            if early and x_t:
                break
        return x_t

    def _check_plan(self, plan: SplitPlan) -> None:
        assert plan.U_w.isdisjoint(plan.U_b)
        assert plan.w_w > 0 and plan.w_b > 0, "split with an empty side"
        assert 0 <= plan.alpha <= Fraction(1, 2)
        assert plan.v_w is None or plan.v_b is None
        # the two rebalancing guarantees (taken-over splitters reaching
        # alpha >= alpha*, and the heavier child keeping alpha above
        # (1 - 2 alpha)/(1 - alpha)) do not hold for every balanced splitter,
        # so the loop counts violations rather than asserting them

    def neighbors(self, mask: int, table) -> int:
        acc = 0
        while mask:
            low = mask & -mask
            acc |= table[low.bit_length() - 1]
            mask ^= low
        return acc

    def sweep(self, umask: int, t: int) -> list[tuple[int, int, bool]]:
        """(vertex, its neighbor towards ``t``, arc points away from ``t``), farthest first."""
        key = (umask, t)
        order = self.sweeps.get(key)
        if order is None:
            tree = self.tree
            order = []
            seen = {t}
            frontier = [t]
            for u in frontier:
                p = tree.parent[u]
                nbrs = [(c, True) for c in tree.children[u]]
                if p is not None:
                    nbrs.append((p, False))
                for y, down in nbrs:
                    if umask >> y & 1 and y not in seen:
                        seen.add(y)
                        frontier.append(y)
                        order.append((y, u, down))
            order.reverse()
            self.sweeps[key] = order
        return order

    def base_case(self, umask, vmask, t, restr, free, fixed) -> int:
        """Exact images of ``t`` when at most one pattern vertex is unrestricted.

        Candidate sets are pairwise disjoint, so injectivity is automatic and
        arc consistency on the tree, swept towards ``t``, is exact.
        """
        self.stats.leaf_calls += 1
        if not umask & (umask - 1):
            # a single pattern vertex
            return restr[t] if t in restr else vmask & ~fixed
        x = dict(restr)
        if free:
            x[free.bit_length() - 1] = vmask & ~fixed
        in_mask, out_mask = self.in_mask, self.out_mask
        for y, u, down in self.sweep(umask, t):
            xy = x[y]
            if not xy:
                return 0
            # u -> y in the pattern needs an out-neighbor of u's image in X_y
            x[u] &= self.neighbors(xy, in_mask if down else out_mask)
        return x[t]


def _restriction_masks(restriction) -> dict[int, int]:
    if restriction is None:
        return {}
    if not isinstance(restriction, Restriction):
        restriction = Restriction(restriction)
    return restriction.masks()


def find_tree(
    tree: OutTree,
    d: Digraph,
    predetermined: int | None,
    t: int,
    restriction: Restriction | Mapping | None,
    colors,
    stats: SolveStats | None = None,
    *,
    existence_only: bool = False,
    prune: bool = True,
    check: bool = True,
) -> set[int]:
    """Vertices of ``d`` that can play pattern vertex ``t`` under the restriction.

    ``colors`` is a :class:`RandomColoring` or :class:`FamilyColoring`.
    With ``existence_only`` the outermost loop stops at the first hit, so
    the result is nonempty iff something was found but may not be complete.
    ``prune`` skips calls with fewer free digraph vertices than free
    pattern vertices; the returned set is unaffected, only the counters.
    """
    if not 0 <= t < tree.k:
        raise ValueError(f"target {t} is not a pattern vertex")
    stats = stats if stats is not None else SolveStats()
    search = _Search(tree, d, colors, stats, prune=prune, check=check)
    search.early_exit = existence_only
    restr = _restriction_masks(restriction)
    for u in restr:
        if not 0 <= u < tree.k:
            raise ValueError(f"restricted vertex {u} is not a pattern vertex")
    result = search.run(_to_mask(range(tree.k)), d.all_mask, predetermined, t, restr, colors.root_key)
    return set(_bits(result))


def base_case_solve(
    tree: OutTree, d: Digraph, t: int, restriction: Restriction | Mapping | None = None,
    vertices: Iterable[int] | None = None,
) -> set[int]:
    """Exact solve when at most one pattern vertex is unrestricted."""
    restr = _restriction_masks(restriction)
    stats = SolveStats()
    search = _Search(tree, d, None, stats, prune=False)
    umask = _to_mask(range(tree.k))
    lmask = _to_mask(restr)
    free = umask & ~lmask
    if free.bit_count() > 1:
        raise ValueError("base case needs at most one unrestricted pattern vertex")
    vmask = d.all_mask if vertices is None else _to_mask(vertices)
    fixed = 0
    for xs in restr.values():
        fixed |= xs
    return set(_bits(search.base_case(umask, vmask, t, restr, free, fixed)))


def _free_weight(tree: OutTree, restriction: Restriction | None) -> int:
    return tree.k - (len(restriction.L) if restriction is not None else 0)


def make_source(mode: str, d: Digraph, tree: OutTree, seed: int = 0, restriction=None, family=None):
    """Coloring source for ``mode`` in {"rand", "det"} sized for this instance."""
    if mode in ("rand", "randomized"):
        return RandomColoring(seed)
    if mode in ("det", "deterministic"):
        if family is None:
            from .universal import get_family

            k = max(1, min(_free_weight(tree, restriction), d.n))
            family = get_family(max(d.n, 1), k)
        return FamilyColoring(family)
    raise ValueError(f"unknown mode {mode!r}")


def solve_out_tree(
    tree: OutTree,
    d: Digraph,
    mode: str = "rand",
    seed: int = 0,
    t: int | None = None,
    restriction: Restriction | Mapping | None = None,
    family=None,
    existence_only: bool = False,
    prune: bool = True,
) -> SolveReport:
    """Top-level solve: the feasible images of ``t`` (default: root of the pattern)."""
    if restriction is not None and not isinstance(restriction, Restriction):
        restriction = Restriction(restriction)
    t = tree.root if t is None else t
    stats = SolveStats()
    mode_name = "deterministic" if mode in ("det", "deterministic") else "randomized"
    fixed = set().union(*restriction.X.values()) if restriction is not None else set()
    if _free_weight(tree, restriction) > d.n - len(fixed):
        return SolveReport(frozenset(), stats, mode_name, seed if mode_name == "randomized" else None)
    source = make_source(mode, d, tree, seed, restriction, family)
    roots = find_tree(
        tree, d, None, t, restriction, source, stats, existence_only=existence_only, prune=prune
    )
    return SolveReport(frozenset(roots), stats, mode_name, seed if mode_name == "randomized" else None)


def _undirected_bfs(tree: OutTree, start: int) -> list[tuple[int, int | None]]:
    """(vertex, already-visited neighbor) pairs in BFS order from ``start``."""
    order = [(start, None)]
    seen = {start}
    for u, _ in order:
        nbrs = list(tree.children[u])
        if tree.parent[u] is not None:
            nbrs.append(tree.parent[u])
        for y in nbrs:
            if y not in seen:
                seen.add(y)
                order.append((y, u))
    return order


def extract_embedding(
    tree: OutTree,
    d: Digraph,
    t: int,
    w: int,
    restriction: Restriction | Mapping | None = None,
    mode: str = "det",
    seed: int = 0,
    max_retries: int = 20,
    family=None,
) -> dict[int, int]:
    """A full copy of the pattern with ``t`` mapped to ``w``, found by pinning.

    Pattern vertices are pinned one at a time in breadth-first order from
    ``t``; each candidate image is accepted once a re-solve with the pin
    still contains ``w``. Randomized re-solves can miss, so each step is
    retried up to ``max_retries`` times before giving up.
    """
    if restriction is not None and not isinstance(restriction, Restriction):
        restriction = Restriction(restriction)
    restriction = restriction or Restriction()
    if t in restriction.X and w not in restriction.X[t]:
        raise EmbeddingError(f"{w} is not a candidate for pattern vertex {t}")
    calls = [0]

    def feasible(r: Restriction) -> bool:
        calls[0] += 1
        rep = solve_out_tree(
            tree, d, mode, rng.derive(seed, calls[0]), t=t, restriction=r, family=family,
        )
        return w in rep.root_images

    current = restriction.with_pin(t, [w])
    phi = {t: w}
    order = _undirected_bfs(tree, t)
    attempts = max_retries if mode in ("rand", "randomized") else 1
    for _ in range(attempts):
        if feasible(current):
            break
    else:
        raise EmbeddingError(f"no copy with {t} -> {w} was found")

    for u, nbr in order[1:]:
        base = phi[nbr]
        pool = d.out_adj[base] if tree.parent[u] == nbr else d.in_adj[base]
        used = set(phi.values())
        blocked = set()
        for v, xs in current.X.items():
            if v != u:
                blocked |= xs
        allowed = restriction.X.get(u)
        cands = [
            c for c in pool
            if c not in used and c not in blocked and (allowed is None or c in allowed)
        ]
        chosen = None
        for _ in range(attempts):
            for c in cands:
                trial = current.with_pin(u, [c])
                if feasible(trial):
                    chosen = c
                    current = trial
                    break
            if chosen is not None:
                break
        if chosen is None:
            raise EmbeddingError(f"could not pin pattern vertex {u}")
        phi[u] = chosen
    return dict(sorted(phi.items()))
