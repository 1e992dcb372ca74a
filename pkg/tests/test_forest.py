import json
import random
from fractions import Fraction
from itertools import product as iproduct

import pytest
from hypothesis import given, settings, strategies as st

from restricted_stirling.forest import (
    ClassFilter,
    Forest,
    ForestError,
    OrderingKind,
    Parity,
    count_class,
    decorated_trees,
    decoration_count,
    decorations,
    degrees_in,
    enumerate_decorated_forests,
    enumerate_trees,
    forest_from_json,
    forest_to_dot,
    forest_to_json,
    has_left_odd_ancestry,
    internal_sequence,
    is_good,
    is_good_via_claim3,
    is_ordered,
    lagrange_tree_sum,
    lmax,
    lmin,
    signed_difference,
    signed_good_count,
    tree_from_json,
    tree_parity,
    tree_to_dot,
    tree_to_json,
    tree_weight,
    vertices,
)
from restricted_stirling.numbers import RestrictedNumberSpec, inverse_entry, inverse_matrix, partition_sum_matrix
from restricted_stirling.restriction import RestrictionError, RestrictionSet, parse_restriction
from restricted_stirling.series import PowerSeries, SequenceKind, revert

from strategies import no_exposed_odds_sets, rationals

INC, MIN, LIN = OrderingKind.INCREASING, OrderingKind.MIN_FIRST, OrderingKind.LINEAR
KINDS = {INC: SequenceKind.SET, MIN: SequenceKind.CYCLE, LIN: SequenceKind.LIST}
NAT = RestrictionSet.naturals()
R_EX = parse_restriction("1,2,4-6")

# the three trees of the goodness illustration; leaves 1 and 2 hang off the right-most path
TREE_A = (((6, 5, 4, 3), 2), 1)
TREE_B = ((((7, 6, 5, 4), 3), 2), 1)
TREE_C = (((((8, 7, 6, 5), 4), 3), 2), 1)


def tree_count_oracle(n_max):
    """Phylogenetic tree counts t(n) from t(n) = sum_{k>=2} (forests of k trees)."""
    t = [1]
    for n in range(2, n_max + 1):
        M = partition_sum_matrix(t + [0], n)
        t.append(sum(M.entry(n, k) for k in range(2, n + 1)))
    return t


def test_enumerate_trees_counts():
    assert tree_count_oracle(7) == [1, 1, 4, 26, 236, 2752, 39208]
    for n, expected in enumerate(tree_count_oracle(7), start=1):
        trees = enumerate_trees(n)
        assert len(trees) == expected
        assert len(set(trees)) == expected
    assert enumerate_trees(1) == [1]
    with pytest.raises(ForestError):
        enumerate_trees(10)


def test_trees_are_canonical():
    for t in enumerate_trees(6):
        assert is_ordered(t, INC)
        assert sorted(_leaves(t)) == list(range(1, 7))
        assert all(len(v) >= 2 for _, v in vertices(t) if isinstance(v, tuple))


def _leaves(t):
    return [v for _, v in vertices(t) if isinstance(v, int)]


@pytest.mark.parametrize("kind", list(OrderingKind))
def test_decoration_counts(kind):
    for n in range(1, 7):
        for t in enumerate_trees(n):
            decs = list(decorations(t, kind))
            assert len(decs) == len(set(decs)) == decoration_count(t, kind)
            assert all(is_ordered(x, kind) for x in decs)


@pytest.mark.parametrize("kind", list(OrderingKind))
@pytest.mark.parametrize("text,d", [("1-", 1), ("1,3", 1), ("1,2,4-6", 1), ("1-", 2)])
def test_generator_matches_decorations(kind, text, d):
    R = parse_restriction(text)
    n_max = 5 if kind is LIN else 6
    for n in range(1, n_max + 1):
        generated = list(decorated_trees(range(1, n + 1), kind, R, d))
        assert len(generated) == len(set(generated))
        brute = {x for t in enumerate_trees(n) if degrees_in(t, R, d) for x in decorations(t, kind)}
        assert set(generated) == brute


@pytest.mark.parametrize("kind", list(OrderingKind))
def test_good_generator_matches_filter(kind):
    for text, d in [("1,2,4-6", 1), ("1-", 1), ("1-", 2), ("1,2", 1)]:
        R = parse_restriction(text)
        for n in range(1, 7 if kind is LIN else 8):
            if kind is LIN and n == 6 and text == "1-":
                continue
            good = set(decorated_trees(range(1, n + 1), kind, R, d, good_only=True))
            assert good == {t for t in decorated_trees(range(1, n + 1), kind, R, d) if is_good(t, R, d)}


def test_decorated_forest_examples():
    out = list(enumerate_decorated_forests(1, 1, LIN, parse_restriction("1,3"), 3))
    assert out == [(Forest((1,)), Parity.EVEN)]
    out = list(enumerate_decorated_forests(3, 1, INC, parse_restriction("1,2"), 1))
    assert len(out) == 3 and all(p is Parity.EVEN for _, p in out)
    assert signed_difference(4, 1, LIN, NAT) == -24 == inverse_entry(4, 1, RestrictedNumberSpec(NAT, SequenceKind.LIST))


def test_count_class_examples():
    assert count_class(4, 1, INC, NAT, 1, ClassFilter.GOOD) == 6
    assert count_class(4, 1, MIN, NAT, 1, ClassFilter.GOOD) == 1
    assert count_class(4, 1, LIN, NAT, 1, ClassFilter.GOOD) == 24
    for n in range(1, 8):
        assert count_class(n, 1, INC, NAT, 1, ClassFilter.GOOD) == _fact(n - 1)
        assert count_class(n, 1, MIN, NAT, 1, ClassFilter.GOOD) == 1
        assert count_class(n, 1, LIN, NAT, 1, ClassFilter.GOOD) == _fact(n)
    with pytest.raises(ForestError):
        count_class(9, 2, LIN, NAT)
    with pytest.raises(RestrictionError):
        count_class(4, 1, INC, parse_restriction("1,3"), 1, ClassFilter.GOOD)


def _fact(n):
    out = 1
    for i in range(2, n + 1):
        out *= i
    return out


@pytest.mark.parametrize("kind", list(OrderingKind))
@pytest.mark.parametrize("text,d", [("1-", 1), ("1,3,4", 1), ("1,2,4-6", 1), ("1-", 2), ("1,2", 3)])
def test_stream_equals_tally(kind, text, d):
    R = parse_restriction(text)
    n_max = 5 if kind is LIN else 6
    filters = [ClassFilter.ALL, ClassFilter.EVEN, ClassFilter.ODD]
    from restricted_stirling.restriction import has_no_exposed_odds

    if has_no_exposed_odds(R):
        filters.append(ClassFilter.GOOD)
    for n in range(1, n_max + 1):
        for k in range(1, n + 1):
            for f in filters:
                assert count_class(n, k, kind, R, d, f, method="stream") == count_class(n, k, kind, R, d, f)


def test_parity_by_edges_for_d1():
    for t in enumerate_trees(6):
        edges = sum(1 for _ in vertices(t)) - 1
        assert sum(internal_sequence(t, 1)) == edges


def test_left_odd_ancestry_examples():
    assert [p for p, _ in vertices(TREE_A) if has_left_odd_ancestry(TREE_A, p, 1)] == [(0,)]
    assert [p for p, _ in vertices(TREE_B) if has_left_odd_ancestry(TREE_B, p, 1)] == [(0,), (0, 0, 0)]
    for t in (TREE_A, TREE_B, TREE_C, 1):
        assert not has_left_odd_ancestry(t, (), 1)
    F = Forest((TREE_A, 7))
    assert has_left_odd_ancestry(F, (0, (0,)), 1)


def test_goodness_examples():
    assert is_good(TREE_A, R_EX) and is_good(TREE_C, R_EX)
    assert not is_good(TREE_B, R_EX)
    R4 = parse_restriction("1-4")
    assert not any(is_good(t, R4) for t in (TREE_A, TREE_B, TREE_C))
    with pytest.raises(RestrictionError):
        is_good(TREE_A, parse_restriction("1,3"))


def test_binary_increasing_trees_are_good_for_two():
    R = parse_restriction("1,2")
    for n in range(1, 7):
        for t in enumerate_trees(n):
            binary = all(len(v) == 2 for _, v in vertices(t) if isinstance(v, tuple))
            assert is_good(t, R) == binary


@pytest.mark.parametrize("text,d", [("1-4", 1), ("1-", 2), ("1-", 1), ("1-6", 1)])
def test_claim3_agrees_with_goodness(text, d):
    R = parse_restriction(text)
    assert is_good_via_claim3(1, R, d)
    for kind in OrderingKind:
        n_max = 6 if kind is LIN else 7
        for n in range(1, n_max + 1):
            if kind is LIN and n == 6 and d == 1:
                continue
            for t in decorated_trees(range(1, n + 1), kind, R, d):
                assert is_good_via_claim3(t, R, d) == is_good(t, R, d)


def test_claim3_needs_three():
    with pytest.raises(RestrictionError):
        is_good_via_claim3(1, parse_restriction("1,2,4-6"))


@pytest.mark.parametrize("text,d", [("1,2", 1), ("1,2,4-6", 1), ("1-", 1), ("1-", 2), ("1,2,6-", 2), ("1-2", 3)])
def test_good_forests_are_even(text, d):
    R = parse_restriction(text)
    for kind in OrderingKind:
        n_max = 6 if kind is LIN else 8
        for n in range(1, n_max + 1):
            for t in decorated_trees(range(1, n + 1), kind, R, d, good_only=True):
                assert tree_parity(t, d) is Parity.EVEN
        for k in range(1, 5):
            for F, par in enumerate_decorated_forests(5, k, kind, R, d, good_only=True):
                assert par is Parity.EVEN


@pytest.mark.parametrize("d", [2, 3])
def test_classes_empty_off_progression(d):
    for kind in OrderingKind:
        for n in range(1, 8):
            for k in range(1, n + 1):
                if (n - k) % d:
                    assert next(enumerate_decorated_forests(n, k, kind, NAT, d), None) is None


@settings(max_examples=12)
@given(st.sets(st.integers(2, 8), max_size=5))
def test_forest_difference_random_pool(extra):
    R = RestrictionSet.from_elements({1} | extra)
    for kind, skind in KINDS.items():
        n_max = 6 if kind is LIN else 7
        inv = inverse_matrix(RestrictedNumberSpec(R, skind), n_max)
        for n in range(1, n_max + 1):
            for k in range(1, n + 1):
                assert signed_difference(n, k, kind, R) == inv.entry(n, k)


@settings(max_examples=12)
@given(no_exposed_odds_sets(max_value=8), st.integers(1, 3))
def test_single_forest_stretched_random_pool(R, d):
    for kind, skind in KINDS.items():
        n_max = {1: 6, 2: 8, 3: 9}[d] if kind is not LIN else {1: 5, 2: 7, 3: 8}[d]
        inv = inverse_matrix(RestrictedNumberSpec(R, skind, d), n_max)
        for n in range(1, n_max + 1):
            for k in range(1, n + 1):
                assert signed_good_count(n, k, kind, R, d, cap=n_max) == inv.entry(n, k)


def _hforest_counts(n_max, d, allowed, leftmost_allowed):
    """Forests of increasingly ordered plane trees under a local degree rule,
    counted straight from the rule (no goodness machinery)."""

    def ok(t, leftmost_of_pair):
        if isinstance(t, int):
            return True
        deg = len(t)
        if deg not in (leftmost_allowed if leftmost_of_pair else allowed):
            return False
        return all(ok(c, i == 0 and deg == d + 1) for i, c in enumerate(t))

    per_size = []
    for m in range(1, n_max + 1):
        per_size.append(sum(1 for t in decorated_trees(range(1, m + 1), INC, NAT) if ok(t, False)))
    return partition_sum_matrix(per_size, n_max)


@pytest.mark.parametrize("r,d", [(1, 1), (2, 1), (3, 1), (1, 2), (2, 2), (2, 3), (None, 1), (None, 2), (None, 3)])
def test_special_case_classes(r, d):
    """Direct counts of the special-case classes against inverse entries."""
    n_max = 7 if d == 1 else 8
    if r is None:
        R = NAT
        H = _hforest_counts(n_max, d, {d + 1}, set())
    else:
        # ordinary vertices get 0 or d+1 children; only left-most children
        # of (d+1)-vertices may take the larger degree
        R = RestrictionSet.initial(2 * r)
        top = 1 + (2 * r - 1) * d
        H = _hforest_counts(n_max, d, {d + 1}, {top})
    inv = inverse_matrix(RestrictedNumberSpec(R, SequenceKind.SET, d), n_max)
    for n in range(1, n_max + 1):
        for k in range(1, n + 1):
            expected = 0 if (n - k) % d else (-1) ** ((n - k) // d) * H.entry(n, k)
            assert inv.entry(n, k) == expected


def test_large_degree_on_ordinary_vertices_overcounts():
    # letting an ordinary vertex take 2r = 4 children as well breaks the identity
    H = _hforest_counts(5, 1, {2, 4}, {4})
    inv = inverse_matrix(RestrictedNumberSpec(RestrictionSet.initial(4), SequenceKind.SET), 5)
    assert (inv.entry(4, 1), -H.entry(4, 1)) == (-6, -7)


def test_tree_weight_examples():
    assert tree_weight(1, [1]) == 1
    assert tree_weight(1, [Fraction(1, 3)]) == 3
    assert tree_weight((1, 2), [1, 1]) == -1
    assert tree_weight((1, 2, 3), [1, 0, 5]) == -5
    with pytest.raises(ForestError):
        tree_weight((1, 2), [0, 1])


def test_lagrange_examples():
    assert lagrange_tree_sum(1, [Fraction(2, 7), 3]) == Fraction(7, 2)
    assert lagrange_tree_sum(2, [1, 1, 0]) == -1


@given(st.lists(rationals, min_size=5, max_size=5))
def test_lagrange_matches_reversion(tail):
    a = [Fraction(1)] + tail
    b = revert(PowerSeries.from_egf([0] + a, 6)).egf()
    for n in range(1, 7):
        assert lagrange_tree_sum(n, a) == b[n]


def test_lagrange_nonunit_leading_term():
    a = [Fraction(2), Fraction(-1, 2), 3, Fraction(5, 4), 1, 0]
    b = revert(PowerSeries.from_egf([0] + a, 6)).egf()
    assert [lagrange_tree_sum(n, a) for n in range(1, 7)] == b[1:]


def test_json_and_dot_roundtrip():
    rng = random.Random(5)
    trees = list(decorated_trees(range(1, 6), LIN, NAT))
    for t in rng.sample(trees, 50) + [1, TREE_B]:
        data = tree_to_json(t)
        assert tree_from_json(json.dumps(data)) == t
        dot = tree_to_dot(t)
        assert dot.startswith("digraph T {") and dot.count("->") == len(data["vertices"]) - 1
    F = Forest((TREE_A, 7, (9, 8)))
    assert forest_from_json(json.loads(json.dumps(forest_to_json(F)))) == F
    assert forest_to_dot(F).count("->") == 10
    with pytest.raises(ForestError):
        tree_from_json({"vertices": [{"id": 0, "parent": None, "rank": 0, "label": None}, {"id": 1, "parent": 0, "rank": 1, "label": 1}]})


def test_lmax_lmin():
    assert lmax(TREE_B) == 7 and lmin(TREE_B) == 1
    assert lmax((3, (1, 5))) == 5 and lmin((3, (1, 5))) == 1
