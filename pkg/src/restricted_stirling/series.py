"""Truncated formal power series with exact rational coefficients.

Coefficients are stored in the ordinary convention: ``coeffs[n]`` is the
coefficient of x^n.  The exponential view n! * coeffs[n] is produced only
at the boundary (``egf``), never stored.
"""
from __future__ import annotations

import enum
import json
from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Iterable, List, Optional, Sequence, Tuple

from .restriction import RestrictionSet, stretch_value, unstretch_value_floor


class SeriesError(ValueError):
    pass


class SequenceKind(enum.Enum):
    SET = "set"
    CYCLE = "cycle"
    LIST = "list"

    def weight(self, m: int) -> int:
        """Number of structures on an m-element block: 1, (m-1)!, m!."""
        if self is SequenceKind.SET:
            return 1
        if self is SequenceKind.CYCLE:
            return factorial(m - 1)
        return factorial(m)


@dataclass(frozen=True)
class PowerSeries:
    coeffs: Tuple[Fraction, ...]

    def __post_init__(self):
        if not self.coeffs:
            raise SeriesError("a series needs at least the constant term")
        object.__setattr__(self, "coeffs", tuple(Fraction(c) for c in self.coeffs))

    @classmethod
    def from_coeffs(cls, coeffs: Iterable, order: int) -> "PowerSeries":
        """Pad or cut ``coeffs`` to exactly order + 1 entries."""
        cs = list(coeffs)[: order + 1]
        cs += [0] * (order + 1 - len(cs))
        return cls(tuple(cs))

    @classmethod
    def from_egf(cls, values: Iterable, order: int) -> "PowerSeries":
        """Series with coefficient values[n] / n!."""
        cs = [Fraction(v) / factorial(n) for n, v in enumerate(values)]
        return cls.from_coeffs(cs, order)

    @classmethod
    def monomial(cls, n: int, order: int, c=1) -> "PowerSeries":
        cs = [0] * (order + 1)
        if n <= order:
            cs[n] = c
        return cls(tuple(cs))

    @classmethod
    def x(cls, order: int) -> "PowerSeries":
        return cls.monomial(1, order)

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, n: int) -> Fraction:
        return self.coeffs[n]

    def ord(self) -> Optional[int]:
        """Index of the first nonzero coefficient (None for the zero series)."""
        for n, c in enumerate(self.coeffs):
            if c:
                return n
        return None

    def egf(self) -> List[Fraction]:
        return [factorial(n) * c for n, c in enumerate(self.coeffs)]

    def __add__(self, other: "PowerSeries") -> "PowerSeries":
        _same_order(self, other)
        return PowerSeries(tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: "PowerSeries") -> "PowerSeries":
        _same_order(self, other)
        return PowerSeries(tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self) -> "PowerSeries":
        return PowerSeries(tuple(-a for a in self.coeffs))

    def scale(self, c) -> "PowerSeries":
        c = Fraction(c)
        return PowerSeries(tuple(c * a for a in self.coeffs))

    def __mul__(self, other: "PowerSeries") -> "PowerSeries":
        return multiply(self, other)

    def truncate(self, order: int) -> "PowerSeries":
        return PowerSeries.from_coeffs(self.coeffs, order)

    def to_json(self, egf: bool = False) -> dict:
        out = {"order": self.order, "coeffs": [_frac_str(c) for c in self.coeffs]}
        if egf:
            out["egf"] = [_frac_str(c) for c in self.egf()]
        return out

    @classmethod
    def from_json(cls, data) -> "PowerSeries":
        if isinstance(data, str):
            data = json.loads(data)
        coeffs = [Fraction(c) for c in data["coeffs"]]
        if len(coeffs) != data["order"] + 1:
            raise SeriesError("coefficient count does not match order")
        return cls(tuple(coeffs))


def _frac_str(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def _same_order(f: PowerSeries, g: PowerSeries) -> None:
    if f.order != g.order:
        raise SeriesError(f"order mismatch: {f.order} vs {g.order}")


def multiply(f: PowerSeries, g: PowerSeries) -> PowerSeries:
    _same_order(f, g)
    N = f.order
    a, b = f.coeffs, g.coeffs
    nz_a = [(i, c) for i, c in enumerate(a) if c]
    out = [Fraction(0)] * (N + 1)
    for i, c in nz_a:
        for j in range(N + 1 - i):
            if b[j]:
                out[i + j] += c * b[j]
    return PowerSeries(tuple(out))


def power(f: PowerSeries, k: int) -> PowerSeries:
    result = PowerSeries.monomial(0, f.order)
    for _ in range(k):
        result = multiply(result, f)
    return result


def compose(f: PowerSeries, g: PowerSeries) -> PowerSeries:
    """f(g(x)) by Horner's rule; g must have zero constant term."""
    _same_order(f, g)
    if g.coeffs[0] != 0:
        raise SeriesError("inner series has a nonzero constant term")
    N = f.order
    acc = PowerSeries.monomial(0, N, f.coeffs[N])
    for n in range(N - 1, -1, -1):
        acc = multiply(acc, g)
        acc = PowerSeries((acc.coeffs[0] + f.coeffs[n],) + acc.coeffs[1:])
    return acc


def reciprocal(f: PowerSeries) -> PowerSeries:
    """1/f for f with nonzero constant term."""
    c0 = f.coeffs[0]
    if c0 == 0:
        raise SeriesError("cannot invert a series with zero constant term")
    N = f.order
    out = [Fraction(0)] * (N + 1)
    out[0] = 1 / c0
    for n in range(1, N + 1):
        s = sum((f.coeffs[i] * out[n - i] for i in range(1, n + 1) if f.coeffs[i]), Fraction(0))
        out[n] = -s / c0
    return PowerSeries(tuple(out))


def _require_ord_one(f: PowerSeries) -> None:
    if f.coeffs[0] != 0 or f.order < 1 or f.coeffs[1] == 0:
        raise SeriesError("series must have ord 1 (zero constant, nonzero linear term)")


def revert(f: PowerSeries) -> PowerSeries:
    """Compositional inverse g of f, with f(g(x)) = g(f(x)) = x to order N.

    Solves [x^n] f(g(x)) = 0 for n >= 2 one coefficient at a time.  The
    coefficient of x^n in g^k (k >= 2) only involves g_1..g_{n-1}, so the
    powers of g needed by the nonzero coefficients of f are grown
    alongside g.
    """
    _require_ord_one(f)
    N = f.order
    f1 = f.coeffs[1]
    degs = [k for k in range(2, N + 1) if f.coeffs[k]]
    top = degs[-1] if degs else 1
    g = [Fraction(0)] * (N + 1)
    g[1] = 1 / f1
    # powers[k][n] = [x^n] g^k, for 1 <= k <= top
    powers = {k: [Fraction(0)] * (N + 1) for k in range(2, top + 1)}
    powers[1] = g
    for n in range(2, N + 1):
        for k in range(2, min(top, n) + 1):
            prev = powers[k - 1]
            s = Fraction(0)
            for i in range(1, n - k + 2):
                if g[i] and prev[n - i]:
                    s += g[i] * prev[n - i]
            powers[k][n] = s
        total = sum((f.coeffs[k] * powers[k][n] for k in degs if k <= n), Fraction(0))
        g[n] = -total / f1
    return PowerSeries(tuple(g))


def x_over_f(f: PowerSeries) -> PowerSeries:
    """The series x/f(x), of order N-1 (constant term 1/c_1)."""
    _require_ord_one(f)
    shifted = PowerSeries(f.coeffs[1:])
    return reciprocal(shifted)


def revert_lagrange(f: PowerSeries) -> PowerSeries:
    """Reversion via [x^n] f^{-1} = (1/n) [x^{n-1}] (x/f(x))^n.

    Independent of ``revert``; kept as a cross-check.
    """
    _require_ord_one(f)
    N = f.order
    h = x_over_f(f)
    out = [Fraction(0)] * (N + 1)
    p = PowerSeries.monomial(0, h.order)
    for n in range(1, N + 1):
        p = multiply(p, h)
        out[n] = p.coeffs[n - 1] / n
    return PowerSeries(tuple(out))


def series_from_restriction(R: RestrictionSet, kind: SequenceKind, d: int, order: int) -> PowerSeries:
    """Sum over n in R of w(m) x^m / m! with m = s_d(n), w the block weight of ``kind``."""
    if 1 not in R:
        raise SeriesError("1 must belong to R")
    if d < 1:
        raise SeriesError("d must be >= 1")
    cs = [Fraction(0)] * (order + 1)
    for n in R.elements(unstretch_value_floor(order, d)):
        m = stretch_value(n, d)
        cs[m] = Fraction(kind.weight(m), factorial(m))
    return PowerSeries(tuple(cs))


def hyperbolic_first_kind(d: int, order: int) -> PowerSeries:
    """H_{d,1}(x) = sum_{n>=1} x^{d(n-1)+1} / (d(n-1)+1)!."""
    if d < 1:
        raise SeriesError("d must be >= 1")
    cs = [Fraction(0)] * (order + 1)
    for m in range(1, order + 1, d):
        cs[m] = Fraction(1, factorial(m))
    return PowerSeries(tuple(cs))


def is_alternating(f: PowerSeries, d: int = 1) -> bool:
    """Sign-alternation test, zeros allowed.

    With zero constant term the series must have c_1 > 0 and is tested
    along {1, d+1, 2d+1, ...}: zero off the progression and
    (-1)^k c_{kd+1} >= 0.  With a nonzero constant term (as for x/f(x))
    c_0 > 0 is required and (-1)^n c_n >= 0 is tested; only d = 1 is
    meaningful there.
    """
    cs = f.coeffs
    if cs[0] != 0:
        if cs[0] < 0:
            raise SeriesError("constant term must be positive")
        if d != 1:
            raise SeriesError("progressions are only defined for series starting at x^1")
        return all((c >= 0) if n % 2 == 0 else (c <= 0) for n, c in enumerate(cs))
    if f.order < 1 or cs[1] <= 0:
        raise SeriesError("coefficient of x must be positive")
    if d < 1:
        raise SeriesError("d must be >= 1")
    for n in range(1, f.order + 1):
        c = cs[n]
        if (n - 1) % d:
            if c != 0:
                return False
            continue
        k = (n - 1) // d
        if (c < 0) if k % 2 == 0 else (c > 0):
            return False
    return True


def first_alternation_failure(f: PowerSeries, d: int = 1) -> Optional[int]:
    """Smallest n at which ``is_alternating`` fails, or None."""
    cs = f.coeffs
    for n in range(1, f.order + 1):
        if not is_alternating(PowerSeries(cs[: n + 1]), d):
            return n
    return None


def blockwise_x_over_f_formula(r: int, order: int) -> PowerSeries:
    """Closed form of x / (x + x^2 + x^{r+1} + x^{r+2}) = 1/((1+x)(1+x^r)).

    For odd r the coefficient at (k-1)r + j (0 <= j < r) is (-1)^{k-1} k (-1)^j;
    for even r it is (-1)^j at 2(k-1)r + j and zero on the rest of each
    period of length 2r.
    """
    if r < 2:
        raise SeriesError("r must be >= 2")
    cs = [Fraction(0)] * (order + 1)
    for n in range(order + 1):
        if r % 2:
            k, j = n // r + 1, n % r
            cs[n] = Fraction((-1) ** (k - 1) * k * (-1) ** j)
        else:
            j = n % (2 * r)
            if j < r:
                cs[n] = Fraction((-1) ** j)
    return PowerSeries(tuple(cs))


def polynomial(coeffs: Sequence, order: int) -> PowerSeries:
    """Build a series from a short list of leading coefficients."""
    return PowerSeries.from_coeffs([Fraction(c) for c in coeffs], order)
