import random

import pytest

from outtree.generate import random_digraph
from outtree.graph import Digraph, internal_count, is_out_branching
from outtree.iob import minimal_trees_in_order, solve_k_int_out_branching, solve_k_int_out_tree
from outtree.oracle import brute_out_branchings, is_embedding
from outtree.trees import is_minimal_k_tree

from conftest import complete, cycle, digraph, path


def best_internal(d):
    return max((internal_count(b) for b in brute_out_branchings(d)), default=-1)


def best_out_tree(d):
    # an out-tree rooted at r can be grown into an out-branching of the part
    # of d reachable from r without losing internal vertices
    best = 0
    for r in range(d.n):
        reach = [r]
        for u in reach:
            reach.extend(v for v in d.out_adj[u] if v not in reach)
        index = {v: i for i, v in enumerate(reach)}
        sub = Digraph.from_arcs(len(reach), [(index[u], index[v]) for u, v in d.arcs
                                             if u in index and v in index])
        best = max(best, best_internal(sub))
    return best


def check_witness(d, k, res):
    assert res.yes
    tree, phi = res.witness_tree
    assert is_minimal_k_tree(tree, k)
    assert is_embedding(tree, d, phi)
    assert phi[tree.root] == res.root
    if res.branching is not None:
        assert is_out_branching(d.n, res.branching, res.root)
        assert all(a in d.arcs for a in res.branching)
        assert internal_count(res.branching) >= k
        assert {(phi[p], phi[c]) for p, c in tree.arcs()} <= set(res.branching)


def test_path_examples():
    d = path(4)
    res = solve_k_int_out_branching(d, 3)
    check_witness(d, 3, res)
    assert sorted(res.branching) == [(0, 1), (1, 2), (2, 3)]
    assert not solve_k_int_out_branching(d, 4).yes


def test_complete_digraph_hamiltonian_path():
    d = complete(5)
    res = solve_k_int_out_branching(d, 4)
    check_witness(d, 4, res)
    assert internal_count(res.branching) == 4


def test_two_source_components():
    d = digraph(3, [(0, 2), (1, 2)])
    for k in (1, 2):
        assert not solve_k_int_out_branching(d, k).yes


def test_out_tree_examples():
    assert solve_k_int_out_tree(digraph(2, [(0, 1)]), 1).yes
    assert not solve_k_int_out_tree(digraph(3, []), 1).yes
    star = digraph(6, [(0, i) for i in range(1, 6)])
    res = solve_k_int_out_tree(star, 1)
    check_witness(star, 1, res)
    assert not solve_k_int_out_tree(star, 2).yes


def test_out_tree_ignores_source_component():
    # two sources, but 0 -> 2 -> 3 is an out-tree with two internal vertices
    d = digraph(4, [(0, 2), (1, 2), (2, 3)])
    assert not solve_k_int_out_branching(d, 2).yes
    res = solve_k_int_out_tree(d, 2)
    check_witness(d, 2, res)


def test_minimal_tree_order():
    trees = minimal_trees_in_order(4)
    sizes = [t.k for t in trees]
    assert sizes == sorted(sizes)
    assert sizes[0] == 5 and sizes[-1] == 7


def test_argument_validation():
    with pytest.raises(ValueError):
        solve_k_int_out_branching(path(3), 0)
    with pytest.raises(ValueError):
        solve_k_int_out_branching(digraph(0, []), 1)
    with pytest.raises(ValueError):
        solve_k_int_out_branching(path(3), 1, mode="ayz")
    with pytest.raises(ValueError):
        solve_k_int_out_branching(path(3), 1, mode="rand", repetitions=0)


def test_deterministic_matches_brute_force_on_random_graphs():
    rnd = random.Random(21)
    for _ in range(80):
        n = rnd.randint(2, 6)
        d = random_digraph(n, rnd.uniform(0.2, 0.6), rnd)
        best = best_internal(d)
        for k in range(1, 5):
            res = solve_k_int_out_branching(d, k)
            assert res.yes == (best >= k)
            if res.yes:
                check_witness(d, k, res)


def test_out_tree_matches_brute_force():
    rnd = random.Random(5)
    for _ in range(40):
        n = rnd.randint(2, 6)
        d = random_digraph(n, rnd.uniform(0.15, 0.5), rnd)
        best = best_out_tree(d)
        for k in range(1, 4):
            assert solve_k_int_out_tree(d, k).yes == (best >= k)


def test_monotone_in_k():
    rnd = random.Random(2)
    for _ in range(20):
        d = random_digraph(6, 0.35, rnd)
        verdicts = [solve_k_int_out_branching(d, k).yes for k in range(1, 6)]
        assert verdicts == sorted(verdicts, reverse=True)


def test_randomized_mode_is_sound_and_rarely_misses():
    rnd = random.Random(13)
    misses = trials = 0
    for i in range(40):
        d = random_digraph(6, 0.4, rnd)
        for k in (2, 3):
            res = solve_k_int_out_branching(d, k, mode="rand", seed=i, repetitions=5)
            truth = best_internal(d) >= k
            if res.yes:
                assert truth
                check_witness(d, k, res)
            elif truth:
                misses += 1
            trials += truth
    assert misses <= 0.05 * max(trials, 1)


def test_cycle_and_structured_graphs():
    assert solve_k_int_out_branching(cycle(5), 4).yes
    assert not solve_k_int_out_branching(cycle(5), 5).yes
    star = digraph(5, [(0, i) for i in range(1, 5)])
    assert solve_k_int_out_branching(star, 1).yes
    assert not solve_k_int_out_branching(star, 2).yes
