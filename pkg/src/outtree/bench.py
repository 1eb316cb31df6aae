"""Benchmark harness over planted instances, emitting CSV rows."""
from __future__ import annotations

import csv
import io
import time
from dataclasses import dataclass

from . import rng
from .colorcoding import ayz_find
from .engine import SolveStats, solve_out_tree
from .generate import planted_instance
from .oracle import brute_embed

COLUMNS = ["n", "k", "mode", "seed", "found", "leaf_calls", "trials_executed", "wall_ns"]
MODES = ("rand", "det", "ayz", "brute")


@dataclass(frozen=True)
class BenchRow:
    n: int
    k: int
    mode: str
    seed: int
    found: bool
    leaf_calls: int
    trials_executed: int
    wall_ns: int | None

    def as_list(self) -> list:
        wall = "" if self.wall_ns is None else self.wall_ns
        return [self.n, self.k, self.mode, self.seed, int(self.found), self.leaf_calls,
                self.trials_executed, wall]


def _solve(inst, mode: str, seed: int) -> tuple[bool, SolveStats]:
    stats = SolveStats()
    if mode in ("rand", "det"):
        rep = solve_out_tree(inst.tree, inst.graph, mode=mode, seed=seed)
        return inst.root in rep.root_images, rep.stats
    if mode == "ayz":
        roots = ayz_find(inst.tree, inst.graph, seed=seed, stats=stats)
        return roots is not None and inst.root in roots, stats
    if mode == "brute":
        return inst.root in brute_embed(inst.tree, inst.graph, max_k=8, max_n=30), stats
    raise ValueError(f"unknown mode {mode!r}")


def run_bench(
    ns, ks, modes=("rand",), instances: int = 1, trials: int = 1,
    density: float = 0.1, seed: int = 0, timing: bool = True,
) -> list[BenchRow]:
    """One row per (instance, mode, trial), in that nesting order.

    Deterministic and brute-force modes do not depend on the seed, so they
    are run once per instance.
    """
    for m in modes:
        if m not in MODES:
            raise ValueError(f"unknown mode {m!r}")
    if instances < 1 or trials < 1:
        raise ValueError("instances and trials must be positive")
    base = rng.named(seed, "bench")
    rows = []
    for n in ns:
        for k in ks:
            if not 1 <= k <= n:
                raise ValueError(f"need 1 <= k <= n, got n={n}, k={k}")
            for i in range(instances):
                inst_seed = rng.derive(base, n, k, i)
                inst = planted_instance(n, k, density, inst_seed)
                for mode in modes:
                    reps = trials if mode in ("rand", "ayz") else 1
                    for j in range(reps):
                        s = rng.derive(inst_seed, j) if mode in ("rand", "ayz") else 0
                        t0 = time.perf_counter_ns()
                        found, stats = _solve(inst, mode, s)
                        wall = time.perf_counter_ns() - t0 if timing else None
                        rows.append(BenchRow(n, k, mode, s, found, stats.leaf_calls,
                                             stats.trials_executed, wall))
    return rows


def format_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(COLUMNS)
    for r in rows:
        w.writerow(r.as_list())
    return buf.getvalue()
