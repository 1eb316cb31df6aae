"""Detecting out-trees and out-branchings with many internal vertices in digraphs."""
from .engine import (
    FamilyColoring,
    RandomColoring,
    Restriction,
    SolveReport,
    SolveStats,
    extract_embedding,
    find_tree,
    iteration_count,
    solve_out_tree,
)
from .graph import Digraph, OutTree, ParseError, parse_digraph, parse_out_tree
from .iob import IOBResult, solve_k_int_out_branching, solve_k_int_out_tree

__all__ = [
    "Digraph",
    "OutTree",
    "ParseError",
    "parse_digraph",
    "parse_out_tree",
    "Restriction",
    "SolveReport",
    "SolveStats",
    "RandomColoring",
    "FamilyColoring",
    "iteration_count",
    "find_tree",
    "solve_out_tree",
    "extract_embedding",
    "IOBResult",
    "solve_k_int_out_branching",
    "solve_k_int_out_tree",
]
