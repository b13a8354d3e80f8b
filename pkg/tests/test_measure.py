import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cubeshadow.bounds import meets_general_lower_bound
from cubeshadow.constructions import golden_ratio, majority, power, sauer_shelah_cover, tribes
from cubeshadow.core import BadColor, CoordSet, EmptyCoordSet, GridGeometry, make_partition
from cubeshadow.measure import (
    BadCoalitionSize,
    balance_deviation,
    colors_above,
    evaluate,
    influence,
    max_influence_k,
    mpv,
    projection_volume,
    projection_volumes,
)
from cubeshadow.search import random_partition

import oracle


def test_majority3_by_hand(backend):
    f = majority(3)
    value, (alpha, S) = mpv(f, 2)
    assert value == Fraction(3, 4)
    assert (alpha, S.coords) == (1, (1, 2))
    assert projection_volume(f, 1, [1, 2]) == Fraction(3, 4)
    assert projection_volume(f, 2, [1, 2]) == Fraction(3, 4)
    assert influence(f, [3]) == Fraction(1, 2)
    assert max_influence_k(f, 1) == (Fraction(1, 2), CoordSet.of([1]))


def test_max_influence_pairs_of_majority3():
    f = majority(3)
    fo = oracle.from_labels(f)
    expected = max(oracle.influence(fo, 3, 2, set(S)) for S in itertools.combinations([1, 2, 3], 2))
    value, _ = max_influence_k(f, 2)
    assert value == expected == 1


def test_colors_above():
    f = majority(3)
    assert colors_above(f, [0, 1], [1, 2]) == {1, 2}
    assert colors_above(f, [1, 1], [1, 2]) == {2}


def test_empty_and_bad_arguments():
    f = majority(3)
    with pytest.raises(EmptyCoordSet):
        projection_volume(f, 1, [])
    with pytest.raises(BadColor):
        projection_volume(f, 3, [1])
    with pytest.raises(BadCoalitionSize):
        max_influence_k(f, 3)
    assert projection_volumes(f, []) == [1, 1]


def test_constant_partition():
    f = make_partition(GridGeometry(3, 2), [1] * 8, 1)
    assert mpv(f, 1)[0] == 1
    assert balance_deviation(f) == 0


@pytest.mark.parametrize("n,N,c,seed", [(2, 3, 3, 1), (3, 2, 3, 2), (3, 3, 2, 3), (4, 2, 4, 4), (2, 4, 2, 5)])
def test_projections_match_oracle(backend, n, N, c, seed):
    f = random_partition(n, N, c, seed)
    fo = oracle.from_labels(f)
    for d in range(1, n + 1):
        for S in itertools.combinations(range(1, n + 1), d):
            got = projection_volumes(f, S)
            want = [oracle.projection_volume(fo, n, N, a, S) for a in range(1, c + 1)]
            assert got == want
        assert mpv(f, d)[0] == oracle.mpv(fo, n, N, c, d)
    for k in range(1, n):
        for S in itertools.combinations(range(1, n + 1), k):
            assert influence(f, S) == oracle.influence(fo, n, N, set(S))


def test_maj5_cubed(backend):
    f = power(majority(5), 3)
    assert f.c == 8
    assert mpv(f, 14)[0] == Fraction(11, 64)
    fo = oracle.from_labels(majority(5))
    assert mpv(majority(5), 4)[0] == oracle.mpv(fo, 5, 2, 2, 4) == Fraction(11, 16)


def test_tribes_influences():
    f = tribes(2, 2)
    fo = oracle.from_labels(f)
    assert f.part_volumes()[1] == oracle.part_volume(fo, 4, 2, 2) == Fraction(7, 16)
    for i in range(1, 5):
        assert influence(f, [i]) == oracle.influence(fo, 4, 2, {i}) == Fraction(3, 8)
    assert balance_deviation(f) == Fraction(1, 16)


def test_cover_projection_of_sauer_shelah():
    cover = sauer_shelah_cover(3, 2, 2)
    for S in CoordSet.all_of_size(3, 2):
        assert projection_volumes(cover, S) == [Fraction(3, 4)] * 2


def test_compressed_matches_expanded(backend):
    g = golden_ratio(13)
    full = g.expanded()
    for d in (1, 2, 3):
        for S in CoordSet.all_of_size(3, d):
            assert projection_volumes(g, S) == projection_volumes(full, S)
    assert influence(g, [3]) == influence(full, [3])


def test_evaluate_report():
    r = evaluate(majority(3), 2, influence_k=1)
    assert r.mpv == Fraction(3, 4)
    assert len(r.projections) == 6
    assert r.influences[CoordSet.of([2])] == Fraction(1, 2)
    doc = r.to_json()
    assert doc["mpv"] == {"num": "3", "den": "4", "decimal": "0.75"}
    assert r.to_csv().splitlines()[0] == "part,S,num,den,decimal"


small = st.tuples(st.integers(2, 3), st.integers(2, 3), st.integers(1, 3), st.integers(0, 2**32))


@given(small)
@settings(max_examples=40, deadline=None)
def test_projection_shrinks_as_S_grows(args):
    n, N, c, seed = args
    f = random_partition(n, N, c, seed)
    for mask in range(1, 1 << n):
        S = CoordSet(mask)
        for j in S.coords:
            T = CoordSet(mask & ~(1 << (j - 1)))
            if len(T):
                assert all(a >= b for a, b in zip(projection_volumes(f, T), projection_volumes(f, S)))


@given(st.integers(2, 4), st.integers(0, 2**32))
@settings(max_examples=40, deadline=None)
def test_two_color_boolean_identity(n, seed):
    # each fiber over a point of [N]^S is monochromatic or split, so the two
    # projections add to one plus the influence of the complement
    f = random_partition(n, 2, 2, seed)
    for mask in range(1, (1 << n) - 1):
        S = CoordSet(mask)
        assert sum(projection_volumes(f, S)) == 1 + influence(f, S.complement(n))


@given(small)
@settings(max_examples=40, deadline=None)
def test_general_lower_bound_always_met(args):
    n, N, c, seed = args
    f = random_partition(n, N, c, seed)
    for d in range(1, n + 1):
        assert meets_general_lower_bound(mpv(f, d)[0], n, d, c)


def test_influence_of_empty_coalition_rejected():
    with pytest.raises(EmptyCoordSet):
        influence(random_partition(3, 3, 3, 9), [])


def test_maj5_cubed_full_cell_scan():
    maj = oracle.majority_rule
    rule = oracle.product_rule(oracle.product_rule(maj, 5, 2, maj), 10, 2, maj)
    grid = list(oracle.cells(15, 2))
    colors = [rule(x) for x in grid]
    best = 0
    for drop in range(15):
        shadow = {(a, x[:drop] + x[drop + 1:]) for a, x in zip(colors, grid)}
        counts = [sum(1 for a, _ in shadow if a == alpha) for alpha in range(1, 9)]
        best = max(best, max(counts))
    assert Fraction(best, 2**14) == mpv(power(majority(5), 3), 14)[0] == Fraction(11, 64)


def test_dictator_influences():
    from cubeshadow.core import boolean_function_as_partition

    f = boolean_function_as_partition([0, 0, 1, 1])
    assert influence(f, [1]) == 1
    assert influence(f, [2]) == 0
    assert max_influence_k(f, 1) == (1, CoordSet.of([1]))
