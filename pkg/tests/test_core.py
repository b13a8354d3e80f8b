from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cubeshadow.core import (
    BadLength,
    CoordSet,
    GridCover,
    GridGeometry,
    OutOfRangeLabel,
    OverlappingParts,
    SizeCapExceeded,
    boolean_function_as_partition,
    cover_to_partition,
    make_partition,
)
from cubeshadow.constructions import majority, sauer_shelah_cover, golden_ratio

import oracle


def test_smallest_partition():
    f = make_partition(GridGeometry(1, 2), [1, 2], 2)
    assert f.part_volumes() == [Fraction(1, 2), Fraction(1, 2)]
    assert f.labels.tolist() == [1, 2]


def test_majority_labels_match_rule():
    f = make_partition(GridGeometry(3, 2), [oracle.majority_rule(x) for x in oracle.cells(3, 2)], 2)
    assert f == majority(3)
    assert f.part_volumes() == [Fraction(1, 2)] * 2


def test_out_of_range_label():
    with pytest.raises(OutOfRangeLabel):
        make_partition(GridGeometry(2, 2), [1, 1, 1, 3], 2)
    with pytest.raises(OutOfRangeLabel):
        make_partition(GridGeometry(2, 2), [0, 1, 1, 1], 2)


def test_bad_length_and_cap(monkeypatch):
    with pytest.raises(BadLength):
        make_partition(GridGeometry(2, 2), [1, 1, 1], 2)
    monkeypatch.setenv("CUBESHADOW_CELL_CAP", "100")
    with pytest.raises(SizeCapExceeded):
        make_partition(GridGeometry(3, 5), np.ones(125), 1)


def test_partition_is_immutable():
    f = majority(3)
    with pytest.raises(ValueError):
        f.labels[0, 0, 0] = 2


def test_cover_to_partition_disjoint():
    g = GridGeometry(1, 2)
    cover = GridCover(g, [np.array([True, False]), np.array([False, True])])
    f = cover_to_partition(cover)
    assert f == make_partition(g, [1, 2], 2)


def test_sauer_shelah_cover_small_instance_is_disjoint():
    cover = sauer_shelah_cover(3, 2, 2)
    # enumerate the 8 cells: part 1 has at most one 0-coordinate, part 2 at most one 1-coordinate
    for cell in oracle.cells(3, 2):
        zeros = cell.count(0)
        assert cover.parts[0][cell] == (zeros <= 1)
        assert cover.parts[1][cell] == (3 - zeros <= 1)
        assert cover.parts[0][cell] + cover.parts[1][cell] == 1
    f = cover_to_partition(cover)
    assert f.part_volumes() == [Fraction(1, 2)] * 2


def test_overlapping_cover_rejected():
    g = GridGeometry(2, 2)
    full = np.ones((2, 2), dtype=bool)
    with pytest.raises(OverlappingParts) as info:
        cover_to_partition(GridCover(g, [full, full]))
    assert info.value.cell == (0, 0)
    assert info.value.parts == [1, 2]


def test_cover_must_cover():
    g = GridGeometry(1, 2)
    with pytest.raises(Exception):
        GridCover(g, [np.array([True, False])])


def test_boolean_function_dictator():
    f = boolean_function_as_partition([0, 0, 1, 1])  # x_1 on two bits
    assert f.labels.tolist() == [[1, 1], [2, 2]]


def test_boolean_function_majority_and_constant():
    table = [1 if sum(x) >= 2 else 0 for x in oracle.cells(3, 2)]
    assert boolean_function_as_partition(table) == majority(3)
    const = boolean_function_as_partition([0] * 8)
    assert const.part_volumes() == [1, 0]


def test_boolean_function_bad_length():
    with pytest.raises(BadLength):
        boolean_function_as_partition([0, 1, 1])


def test_coordset_basics():
    S = CoordSet.of([1, 3])
    assert S.coords == (1, 3)
    assert S.axes == (0, 2)
    assert len(S) == 2
    assert S.complement(4) == CoordSet.of([2, 4])
    assert 3 in S and 2 not in S
    assert CoordSet.of([1]) <= S
    assert [T.coords for T in CoordSet.all_of_size(3, 2)] == [(1, 2), (1, 3), (2, 3)]


def test_compressed_expands_consistently():
    g = golden_ratio(10)
    full = g.expanded()
    assert full.labels.shape == (10, 10, 10)
    assert g == full
    assert g.part_volumes() == full.part_volumes()
    assert g.label_at((9, 9, 0)) == full.labels[9, 9, 0] == 1


partitions = st.tuples(st.integers(1, 3), st.integers(1, 3), st.integers(1, 4)).flatmap(
    lambda t: st.tuples(
        st.just(t), st.lists(st.integers(1, t[2]), min_size=t[1] ** t[0], max_size=t[1] ** t[0])
    )
)


@given(partitions)
@settings(max_examples=100, deadline=None)
def test_volume_additivity(args):
    (n, N, c), labels = args
    f = make_partition(GridGeometry(n, N), labels, c)
    assert sum(f.part_volumes()) == 1


@given(partitions)
@settings(max_examples=60, deadline=None)
def test_round_trip_through_cover(args):
    (n, N, c), labels = args
    f = make_partition(GridGeometry(n, N), labels, c)
    assert cover_to_partition(f.as_cover()) == f


@given(st.lists(st.fractions(max_denominator=50), min_size=2, max_size=6))
def test_rationals_stay_canonical(values):
    from math import gcd

    acc = Fraction(1)
    for v in values:
        acc = acc * v + v - acc / (1 + abs(v))
        assert acc.denominator > 0
        assert gcd(acc.numerator, acc.denominator) == 1
