import pytest

from outtree.engine import Restriction
from outtree.oracle import (
    GuardError,
    brute_colorful_sets,
    brute_embed,
    brute_embeddings,
    brute_out_branchings,
    brute_rooted_trees,
    canonical_form,
    is_embedding,
)

from conftest import cycle, digraph, path, tree


def test_brute_embed_examples():
    assert brute_embed(tree(None, 0), digraph(2, [(0, 1)])) == {0: {0: 0, 1: 1}}
    assert set(brute_embed(tree(None, 0, 1), cycle(3))) == {0, 1, 2}
    d = digraph(3, [(0, 1), (2, 1)])
    assert set(brute_embed(tree(None, 0), d, Restriction({1: {1}}))) == {0, 2}
    assert set(brute_embed(tree(None, 0), d, {1: {1}}, target=1)) == {1}


def test_restriction_excludes_other_candidates():
    # c is pinned to {1, 2}; no other pattern vertex may use 1 or 2
    d = digraph(3, [(1, 2), (2, 1), (0, 1)])
    assert set(brute_embed(tree(None, 0), d, {1: {1, 2}})) == {0}


def test_brute_embeddings_counts_every_copy():
    assert len(list(brute_embeddings(tree(None, 0), cycle(3)))) == 3
    assert list(brute_embeddings(tree(None, 0), cycle(3), pins={0: 2})) == [{0: 2, 1: 0}]


def test_is_embedding():
    t = tree(None, 0)
    d = digraph(2, [(0, 1)])
    assert is_embedding(t, d, {0: 0, 1: 1})
    assert not is_embedding(t, d, {0: 1, 1: 0})
    assert not is_embedding(t, d, {0: 0, 1: 0})
    assert not is_embedding(t, d, {0: 0})
    assert not is_embedding(t, d, {0: 0, 1: 1}, {1: {0}})


def test_out_branching_counts():
    assert len(list(brute_out_branchings(path(3)))) == 1
    assert len(list(brute_out_branchings(cycle(3)))) == 3
    assert list(brute_out_branchings(digraph(2, []))) == []
    assert list(brute_out_branchings(digraph(1, []))) == [[]]


def test_rooted_tree_classes():
    assert len(brute_rooted_trees(1)) == 1
    assert len(brute_rooted_trees(3)) == 2
    assert len(brute_rooted_trees(5)) == 9


def test_canonical_form_ignores_labels():
    assert canonical_form(tree(None, 0, 0, 1)) == canonical_form(tree(None, 0, 0, 2))
    assert canonical_form(tree(None, 0, 1)) != canonical_form(tree(None, 0, 0))


def test_colorful_sets_definition():
    sets = brute_colorful_sets(tree(None, 0), digraph(3, [(0, 1), (0, 2)]), [1, 2, 1])
    assert sets == [{frozenset({1, 2})}, set(), set()]


@pytest.mark.parametrize(
    "call",
    [
        lambda: brute_embed(tree(None, *range(6)), digraph(7, [])),
        lambda: brute_embed(tree(None), digraph(13, [])),
        lambda: list(brute_out_branchings(digraph(8, []))),
        lambda: brute_rooted_trees(8),
        lambda: brute_rooted_trees(0),
        lambda: brute_colorful_sets(tree(None), digraph(9, []), [1] * 9),
    ],
)
def test_guards(call):
    with pytest.raises(GuardError):
        call()
