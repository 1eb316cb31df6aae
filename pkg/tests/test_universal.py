import itertools

import pytest

from outtree.universal import (
    BinaryFamily,
    build_universal_family,
    format_family,
    load_or_build,
    parse_family,
    size_bound,
    verify_universal,
)


def test_three_two_family():
    fam = build_universal_family(3, 2)
    assert len(fam) >= 4
    assert verify_universal(fam)
    for pair in itertools.combinations(range(3), 2):
        assert {tuple(f[i] for i in pair) for f in fam.functions} == set(itertools.product((0, 1), repeat=2))


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_square_case_is_the_full_cube(k):
    fam = build_universal_family(k, k)
    assert len(fam) == 2**k
    assert len(set(fam.functions)) == 2**k
    assert verify_universal(fam)


def test_eight_three_and_ten_three():
    assert verify_universal(build_universal_family(8, 3))
    fam = build_universal_family(10, 3)
    assert verify_universal(fam)
    assert len(fam) <= size_bound(10, 3)


def test_verify_rejects_missing_vector():
    funcs = tuple(f for f in itertools.product((0, 1), repeat=2) if f != (1, 1))
    assert not verify_universal(BinaryFamily(2, 2, funcs))
    cube = BinaryFamily(3, 3, tuple(itertools.product((0, 1), repeat=3)))
    assert verify_universal(cube)


def test_larger_pool_based_family():
    fam = build_universal_family(14, 3)
    assert verify_universal(fam)
    assert len(fam) <= size_bound(14, 3)
    # same input, same family
    assert build_universal_family(14, 3) == fam


def test_masks_and_array():
    fam = BinaryFamily(3, 1, ((1, 0, 1), (0, 1, 0)))
    assert fam.masks() == [0b101, 0b010]
    assert fam.as_array().shape == (2, 3)


def test_text_round_trip_and_errors():
    fam = build_universal_family(5, 2)
    text = format_family(fam)
    assert text.splitlines()[0] == f"5 2 {len(fam)}"
    assert parse_family(text) == fam
    with pytest.raises(ValueError):
        parse_family("3 2 1\n0101\n")
    with pytest.raises(ValueError):
        parse_family("3 2 2\n010\n")
    with pytest.raises(ValueError):
        parse_family("x\n")


def test_cache_directory(tmp_path):
    fam = load_or_build(6, 2, str(tmp_path))
    path = tmp_path / "universal_6_2.txt"
    assert path.read_text() == format_family(fam)
    assert load_or_build(6, 2, str(tmp_path)) == fam
    assert load_or_build(6, 2) == fam


def test_build_guards():
    with pytest.raises(ValueError):
        build_universal_family(3, 4)
    with pytest.raises(ValueError):
        build_universal_family(3, 0)
    with pytest.raises(ValueError):
        build_universal_family(40, 8)
