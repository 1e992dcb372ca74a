from fractions import Fraction
from math import factorial

import pytest
from hypothesis import given, strategies as st

from restricted_stirling.restriction import RestrictionSet, parse_restriction
from restricted_stirling.series import (
    PowerSeries,
    SequenceKind,
    SeriesError,
    blockwise_x_over_f_formula,
    compose,
    first_alternation_failure,
    hyperbolic_first_kind,
    is_alternating,
    multiply,
    polynomial,
    revert,
    revert_lagrange,
    series_from_restriction,
    x_over_f,
)

from strategies import rationals

N = RestrictionSet.naturals()


def exp_minus_one(order):
    return PowerSeries.from_coeffs([0] + [Fraction(1, factorial(n)) for n in range(1, order + 1)], order)


def log_one_plus(order):
    return PowerSeries.from_coeffs([0] + [Fraction((-1) ** (n - 1), n) for n in range(1, order + 1)], order)


def test_series_from_restriction_examples():
    assert series_from_restriction(N, SequenceKind.SET, 1, 5) == exp_minus_one(5)
    cyc = series_from_restriction(N, SequenceKind.CYCLE, 1, 5)
    assert list(cyc.coeffs) == [0] + [Fraction(1, n) for n in range(1, 6)]
    assert list(series_from_restriction(N, SequenceKind.SET, 2, 5).coeffs) == [0, 1, 0, Fraction(1, 6), 0, Fraction(1, 120)]
    with pytest.raises(SeriesError):
        series_from_restriction(parse_restriction("2-"), SequenceKind.SET, 1, 5)


def test_multiply_examples():
    x = PowerSeries.x(4)
    assert multiply(x, x) == PowerSeries.monomial(2, 4)
    assert multiply(polynomial([1, 1], 4), polynomial([1, -1], 4)) == polynomial([1, 0, -1], 4)
    e = PowerSeries.from_egf([1] * 5, 4)
    e_neg = PowerSeries.from_egf([(-1) ** n for n in range(5)], 4)
    assert multiply(e, e_neg) == PowerSeries.monomial(0, 4)
    with pytest.raises(SeriesError):
        multiply(PowerSeries.x(3), PowerSeries.x(4))


def test_compose_examples():
    assert compose(polynomial([0, 0, 1], 3), polynomial([0, 1, 1], 3)) == polynomial([0, 0, 1, 2], 3)
    f = polynomial([3, 1, 4, 1, 5], 6)
    assert compose(f, PowerSeries.x(6)) == f
    assert compose(log_one_plus(6), exp_minus_one(6)) == PowerSeries.x(6)
    with pytest.raises(SeriesError):
        compose(f, polynomial([1, 1], 6))


def test_revert_examples():
    g = revert(exp_minus_one(8)).egf()
    assert g[1:] == [(-1) ** (n - 1) * factorial(n - 1) for n in range(1, 9)]
    g = revert(polynomial([0, 1, Fraction(1, 2)], 9)).egf()

    def dfact(m):
        return 1 if m <= 0 else m * dfact(m - 2)

    assert g[1:] == [(-1) ** (n - 1) * dfact(2 * n - 3) for n in range(1, 10)]
    g = revert(polynomial([0, 1, 1], 9)).egf()
    assert g[1:] == [(-1) ** (n - 1) * factorial(2 * n - 2) // factorial(n - 1) for n in range(1, 10)]
    with pytest.raises(SeriesError):
        revert(polynomial([0, 0, 1], 4))


def test_hyperbolic_examples():
    assert hyperbolic_first_kind(1, 7) == exp_minus_one(7)
    assert hyperbolic_first_kind(2, 7) == series_from_restriction(N, SequenceKind.SET, 2, 7)
    assert hyperbolic_first_kind(3, 7) == polynomial([0, 1, 0, 0, Fraction(1, 24), 0, 0, Fraction(1, 5040)], 7)


def test_is_alternating_examples():
    assert is_alternating(log_one_plus(12))
    g = revert(hyperbolic_first_kind(2, 11))
    assert is_alternating(g, 2)
    assert [abs(c) for c in g.egf()[1::2]] == [1, 1, 9, 225, 11025, 893025]
    assert not is_alternating(exp_minus_one(6))
    assert first_alternation_failure(exp_minus_one(6)) == 2
    with pytest.raises(SeriesError):
        is_alternating(-PowerSeries.x(3))


def test_x_over_f_examples():
    assert x_over_f(polynomial([0, 1, 1], 8)) == PowerSeries(tuple((-1) ** n for n in range(8)))
    assert x_over_f(PowerSeries.x(5)) == PowerSeries.monomial(0, 4)
    h = x_over_f(polynomial([0, 1, 1, 0, 1, 1], 13))
    assert [int(c) for c in h.coeffs] == [1, -1, 1, -2, 2, -2, 3, -3, 3, -4, 4, -4, 5]


@pytest.mark.parametrize("r", [2, 3, 4, 5, 6, 7])
def test_blockwise_formula_is_product_of_geometric_series(r):
    order = 40
    direct = multiply(
        PowerSeries(tuple((-1) ** n for n in range(order + 1))),
        PowerSeries(tuple((-1) ** (n // r) if n % r == 0 else 0 for n in range(order + 1))),
    )
    assert blockwise_x_over_f_formula(r, order) == direct


def test_hyperbolic_reversion_third_order():
    g = revert(hyperbolic_first_kind(3, 13)).egf()
    assert [abs(g[n]) for n in (1, 4, 7, 10, 13)] == [1, 1, 34, 5446, 2405116]


def test_json_roundtrip():
    f = polynomial([0, 1, Fraction(-2, 3), 5], 5)
    data = f.to_json(egf=True)
    assert data["coeffs"] == ["0", "1", "-2/3", "5", "0", "0"]
    assert data["egf"][2] == "-4/3"
    assert PowerSeries.from_json(data) == f


ord_one_series = st.lists(rationals, min_size=1, max_size=40).map(
    lambda cs: PowerSeries.from_coeffs([0, 1] + cs, len(cs) + 1)
)


@given(ord_one_series)
def test_reversion_round_trip(f):
    g = revert(f)
    x = PowerSeries.x(f.order)
    assert compose(f, g) == x
    assert compose(g, f) == x


@given(ord_one_series.filter(lambda f: f.order <= 20))
def test_lagrange_consistency(f):
    assert revert_lagrange(f) == revert(f)


@given(st.lists(rationals, min_size=1, max_size=29))
def test_alternating_x_over_f_gives_alternating_reversion(cs):
    f = PowerSeries.from_coeffs([0, 1] + cs, len(cs) + 1)
    if is_alternating(x_over_f(f)):
        assert is_alternating(revert(f))


@pytest.mark.parametrize("d", [1, 2, 3, 4])
def test_hyperbolic_reversion_supported_on_progression(d):
    g = revert(hyperbolic_first_kind(d, 25))
    assert all(c == 0 for n, c in enumerate(g.coeffs) if n % d != 1 % d or n == 0)
    assert is_alternating(g, d)
