"""Command-line interface.

Exit codes: 0 found / ok, 1 not found, 2 input error.
"""
from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass

from . import rng
from .bench import MODES, format_csv, run_bench
from .colorcoding import ayz_find
from .engine import EmbeddingError, SolveStats, extract_embedding, solve_out_tree
from .graph import (
    ParseError, format_digraph, format_out_tree, internal_count, parse_digraph, parse_out_tree,
)
from .iob import solve_k_int_out_branching
from .oracle import GuardError, brute_embed
from .partition import make_split_plan
from .trees import MAX_ENUM_K, enumerate_minimal_k_trees, enumerate_rooted_trees
from .universal import format_family, load_or_build

EXIT_FOUND, EXIT_NOT_FOUND, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    mode: str = "det"
    seed: int = 0
    reps: int = 1
    witness: bool = False
    max_brute_k: int = 8
    max_brute_n: int = 16

    @classmethod
    def from_args(cls, args, modes) -> "RunConfig":
        if args.mode not in modes:
            raise InputError(f"unknown mode {args.mode!r}")
        if args.seed is not None and args.mode not in ("rand", "ayz"):
            raise InputError("--seed only applies to the rand and ayz modes")
        if args.reps is not None and args.mode != "rand":
            raise InputError("--reps only applies to the rand mode")
        reps = 1 if args.reps is None else args.reps
        if reps < 1:
            raise InputError("--reps must be at least 1")
        seed = 0 if args.seed is None else args.seed
        if not 0 <= seed < 1 << 64:
            raise InputError("--seed must be a 64-bit unsigned integer")
        return cls(args.mode, seed, reps, bool(getattr(args, "witness", False)))


def _read(path: str) -> str:
    try:
        with open(path, "rb") as fh:
            return fh.read().decode("ascii")
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    except UnicodeDecodeError:
        raise InputError(f"{path} is not ASCII text") from None


def _parse(kind: str, path: str):
    text = _read(path)
    try:
        return parse_digraph(text) if kind == "graph" else parse_out_tree(text)
    except ParseError as exc:
        raise InputError(f"{path}: {exc}") from None


def cmd_solve_tree(args, out) -> int:
    cfg = RunConfig.from_args(args, MODES)
    d = _parse("graph", args.graph)
    tree = _parse("tree", args.tree)
    stats = SolveStats()
    witness = None
    if cfg.mode in ("rand", "det"):
        roots: set[int] = set()
        for rep in range(cfg.reps):
            seed = cfg.seed if cfg.reps == 1 else rng.derive(cfg.seed, rep)
            report = solve_out_tree(tree, d, mode=cfg.mode, seed=seed)
            stats.merge(report.stats)
            roots |= report.root_images
    elif cfg.mode == "ayz":
        roots = ayz_find(tree, d, seed=cfg.seed, stats=stats) or set()
    else:
        try:
            found = brute_embed(tree, d, max_k=cfg.max_brute_k, max_n=cfg.max_brute_n)
        except GuardError as exc:
            raise InputError(str(exc)) from None
        roots = set(found)
        if roots:
            witness = found[min(roots)]
    if not roots:
        out.write("NO\n")
        out.write(f"stats: leaf_calls={stats.leaf_calls} trials={stats.trials_executed}\n")
        return EXIT_NOT_FOUND
    out.write("YES\n")
    out.write("roots: " + " ".join(str(v) for v in sorted(roots)) + "\n")
    if cfg.witness:
        if witness is None:
            witness = extract_embedding(tree, d, tree.root, min(roots), mode="det")
        for i in range(tree.k):
            out.write(f"map {i} -> {witness[i]}\n")
    out.write(f"stats: leaf_calls={stats.leaf_calls} trials={stats.trials_executed}\n")
    return EXIT_FOUND


def cmd_solve_iob(args, out) -> int:
    cfg = RunConfig.from_args(args, ("det", "rand"))
    d = _parse("graph", args.graph)
    if args.k < 1:
        raise InputError("-k must be at least 1")
    if d.n < 1:
        raise InputError("the digraph needs at least one vertex")
    res = solve_k_int_out_branching(d, args.k, mode=cfg.mode, seed=cfg.seed, repetitions=cfg.reps)
    if not res.yes:
        out.write("NO\n")
        return EXIT_NOT_FOUND
    out.write("YES\n")
    for u, v in sorted(res.branching):
        out.write(f"{u} {v}\n")
    out.write(f"# internal: {internal_count(res.branching)}\n")
    return EXIT_FOUND


def cmd_enum_trees(args, out) -> int:
    k = args.k
    if args.minimal:
        try:
            trees = enumerate_minimal_k_trees(k)
        except ValueError as exc:
            raise InputError(str(exc)) from None
    else:
        if not 1 <= k <= MAX_ENUM_K:
            raise InputError(f"-k must lie in [1, {MAX_ENUM_K}]")
        trees = enumerate_rooted_trees(k)
    count = 0
    try:
        for t in trees:
            if args.leaves is not None and len(t.leaves) != args.leaves:
                continue
            out.write(format_out_tree(t))
            count += 1
    except ValueError as exc:
        raise InputError(str(exc)) from None
    out.write(f"count: {count}\n")
    return EXIT_FOUND


def cmd_gen_universal(args, out) -> int:
    if not 1 <= args.k <= args.n:
        raise InputError("need 1 <= k <= n")
    try:
        fam = load_or_build(args.n, args.k, args.cache_dir)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    except OSError as exc:
        raise InputError(f"cache directory: {exc.strerror}") from None
    out.write(format_family(fam))
    return EXIT_FOUND


def cmd_gen_planted(args, out) -> int:
    from .generate import planted_instance

    if not 1 <= args.k <= args.n:
        raise InputError("need 1 <= k <= n")
    if not 0.0 <= args.density <= 1.0:
        raise InputError("--density must lie in [0, 1]")
    inst = planted_instance(args.n, args.k, args.density, args.seed)
    try:
        with open(args.graph_out, "w") as fh:
            fh.write(format_digraph(inst.graph))
        with open(args.tree_out, "w") as fh:
            fh.write(format_out_tree(inst.tree))
    except OSError as exc:
        raise InputError(f"cannot write output: {exc.strerror}") from None
    out.write(f"root: {inst.root}\n")
    for i in range(inst.tree.k):
        out.write(f"map {i} -> {inst.embedding[i]}\n")
    return EXIT_FOUND


def _int_list(text: str) -> list[int]:
    if not text:
        return []
    try:
        return [int(x) for x in text.split(",")]
    except ValueError:
        raise InputError(f"expected a comma-separated list of integers, got {text!r}") from None


def cmd_debug_split(args, out) -> int:
    tree = _parse("tree", args.tree)
    target = tree.root if args.target is None else args.target
    restricted = _int_list(args.restricted)
    for v in [target, *restricted] + ([] if args.predetermined is None else [args.predetermined]):
        if not 0 <= v < tree.k:
            raise InputError(f"{v} is not a pattern vertex")
    try:
        plan = make_split_plan(tree, target, restricted, args.predetermined)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    out.write(plan.describe() + "\n")
    return EXIT_FOUND


def cmd_bench(args, out) -> int:
    ns, ks = _int_list(args.n), _int_list(args.k)
    modes = args.modes.split(",")
    if not ns or not ks:
        raise InputError("-n and -k need at least one value")
    try:
        rows = run_bench(ns, ks, modes, args.instances, args.trials, args.density,
                         args.seed, timing=not args.no_timing)
    except (ValueError, GuardError) as exc:
        raise InputError(str(exc)) from None
    out.write(format_csv(rows))
    return EXIT_FOUND


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="outtree", description="Out-tree and out-branching search.")
    sub = p.add_subparsers(dest="command", required=True)

    solve = sub.add_parser("solve").add_subparsers(dest="what", required=True)
    st = solve.add_parser("tree", help="find copies of a pattern out-tree")
    st.add_argument("-g", "--graph", required=True)
    st.add_argument("-t", "--tree", required=True)
    st.add_argument("--mode", default="det", choices=MODES)
    st.add_argument("--seed", type=int)
    st.add_argument("--reps", type=int)
    st.add_argument("--witness", action="store_true")
    st.set_defaults(func=cmd_solve_tree)

    si = solve.add_parser("iob", help="out-branching with at least k internal vertices")
    si.add_argument("-g", "--graph", required=True)
    si.add_argument("-k", type=int, required=True)
    si.add_argument("--mode", default="det", choices=("det", "rand"))
    si.add_argument("--seed", type=int)
    si.add_argument("--reps", type=int)
    si.set_defaults(func=cmd_solve_iob)

    enum = sub.add_parser("enum").add_subparsers(dest="what", required=True)
    et = enum.add_parser("trees", help="rooted trees as parent lines")
    et.add_argument("-k", type=int, required=True)
    et.add_argument("--leaves", type=int)
    et.add_argument("--minimal", action="store_true",
                    help="minimal trees with k internal vertices")
    et.set_defaults(func=cmd_enum_trees)

    gen = sub.add_parser("gen").add_subparsers(dest="what", required=True)
    gu = gen.add_parser("universal", help="(n, k)-universal binary family")
    gu.add_argument("-n", type=int, required=True)
    gu.add_argument("-k", type=int, required=True)
    gu.add_argument("--cache-dir")
    gu.set_defaults(func=cmd_gen_universal)

    gp = gen.add_parser("planted", help="random instance with a planted pattern copy")
    gp.add_argument("-n", type=int, required=True)
    gp.add_argument("-k", type=int, required=True)
    gp.add_argument("--density", type=float, default=0.1)
    gp.add_argument("--seed", type=int, default=0)
    gp.add_argument("--graph-out", required=True)
    gp.add_argument("--tree-out", required=True)
    gp.set_defaults(func=cmd_gen_planted)

    debug = sub.add_parser("debug").add_subparsers(dest="what", required=True)
    ds = debug.add_parser("split", help="show the split chosen for a pattern")
    ds.add_argument("-t", "--tree", required=True)
    ds.add_argument("--target", type=int)
    ds.add_argument("--restricted", default="")
    ds.add_argument("--predetermined", type=int)
    ds.set_defaults(func=cmd_debug_split)

    b = sub.add_parser("bench", help="CSV benchmark over planted instances")
    b.add_argument("-n", required=True, help="comma-separated digraph sizes")
    b.add_argument("-k", required=True, help="comma-separated pattern sizes")
    b.add_argument("--modes", default="rand")
    b.add_argument("--instances", type=int, default=1)
    b.add_argument("--trials", type=int, default=1)
    b.add_argument("--density", type=float, default=0.1)
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--no-timing", action="store_true", help="leave wall_ns empty")
    b.set_defaults(func=cmd_bench)
    return p


def main(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_FOUND if exc.code == 0 else EXIT_INPUT
    try:
        return args.func(args, out)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except EmbeddingError as exc:  # pragma: no cover - deterministic extraction cannot miss
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
