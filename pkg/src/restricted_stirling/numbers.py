"""Restricted Stirling and Lah triangles and their exact inverses.

Every number is available by two routes: a brute-force sum over set
partitions (``restricted_number_oracle``) and column extraction from the
exponential generating function a(x)^k / k! (``build_matrix``).  Inverse
entries likewise come from forward substitution and from the reversion of
a(x) followed by the partition sum over the reverted sequence.
"""
from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial, prod
from typing import Dict, List, Sequence

from .partitions import set_partitions
from .restriction import RestrictionSet, format_restriction, stretch
from .series import PowerSeries, SequenceKind, multiply, revert, series_from_restriction

ORACLE_CAP = 12
MATRIX_CAP = 64
BESSEL_CAP = 9


class NumbersError(ValueError):
    pass


@dataclass(frozen=True)
class RestrictedNumberSpec:
    R: RestrictionSet
    kind: SequenceKind = SequenceKind.SET
    d: int = 1

    def block_weight(self, m: int) -> int:
        """a_m: number of allowed structures on an m-element block."""
        if m not in stretch(self.R, self.d):
            return 0
        return self.kind.weight(m)

    def to_json(self) -> dict:
        return {"R": format_restriction(self.R), "kind": self.kind.value, "d": self.d}


@dataclass(frozen=True)
class TriangularMatrix:
    """1-indexed lower-triangular integer matrix; rows[n-1][k-1] = entry(n, k)."""

    rows: tuple

    @property
    def size(self) -> int:
        return len(self.rows)

    def entry(self, n: int, k: int) -> int:
        if not (1 <= n <= self.size and k >= 1):
            raise IndexError((n, k))
        if k > n:
            return 0
        return self.rows[n - 1][k - 1]

    @classmethod
    def identity(cls, N: int) -> "TriangularMatrix":
        return cls(tuple(tuple(int(j == n) for j in range(n + 1)) for n in range(N)))

    @classmethod
    def from_function(cls, N: int, fn) -> "TriangularMatrix":
        return cls(tuple(tuple(fn(n, k) for k in range(1, n + 1)) for n in range(1, N + 1)))

    def __matmul__(self, other: "TriangularMatrix") -> "TriangularMatrix":
        if self.size != other.size:
            raise NumbersError("size mismatch")
        return TriangularMatrix.from_function(
            self.size,
            lambda n, k: sum(self.entry(n, j) * other.entry(j, k) for j in range(k, n + 1)),
        )

    def to_json(self, spec: RestrictedNumberSpec = None) -> dict:
        out = {"N": self.size, "rows": [[str(v) for v in row] for row in self.rows]}
        if spec is not None:
            out = {"spec": spec.to_json(), **out}
        return out

    @classmethod
    def from_json(cls, data) -> "TriangularMatrix":
        if isinstance(data, str):
            data = json.loads(data)
        rows = tuple(tuple(int(v) for v in row) for row in data["rows"])
        if len(rows) != data["N"] or any(len(r) != i + 1 for i, r in enumerate(rows)):
            raise NumbersError("malformed triangle")
        return cls(rows)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n", "k", "value"])
        for n, row in enumerate(self.rows, start=1):
            for k, v in enumerate(row, start=1):
                w.writerow([n, k, v])
        return buf.getvalue()


def restricted_number_oracle(n: int, k: int, spec: RestrictedNumberSpec, cap: int = ORACLE_CAP) -> int:
    """Sum over all set partitions of [n] into k blocks of prod a_{|P_i|}."""
    if n < 1 or k < 1:
        raise NumbersError("n and k must be positive")
    if n > cap:
        raise NumbersError(f"oracle refuses n={n} > cap={cap}")
    weights = [spec.block_weight(m) for m in range(n + 1)]
    return sum(prod(weights[len(b)] for b in p) for p in set_partitions(range(1, n + 1), k))


def oracle_row(n: int, spec: RestrictedNumberSpec, cap: int = ORACLE_CAP) -> List[int]:
    """All entries (k = 1..n) of row n by one pass over the partitions of [n]."""
    if n > cap:
        raise NumbersError(f"oracle refuses n={n} > cap={cap}")
    weights = [spec.block_weight(m) for m in range(n + 1)]
    row = [0] * n
    for p in set_partitions(range(1, n + 1)):
        row[len(p) - 1] += prod(weights[len(b)] for b in p)
    return row


def oracle_matrix(spec: RestrictedNumberSpec, N: int, cap: int = ORACLE_CAP) -> TriangularMatrix:
    return TriangularMatrix(tuple(tuple(oracle_row(n, spec, cap)) for n in range(1, N + 1)))


def _exact_int(x: Fraction, where) -> int:
    if x.denominator != 1:
        raise NumbersError(f"non-integer value {x} at {where}")
    return x.numerator


def _columns_from_egf(a: PowerSeries, N: int) -> TriangularMatrix:
    """entry(n, k) = n! [x^n] a(x)^k / k!."""
    rows = [[0] * n for n in range(1, N + 1)]
    p = PowerSeries.monomial(0, N)
    for k in range(1, N + 1):
        p = multiply(p, a)
        kf = factorial(k)
        for n in range(k, N + 1):
            rows[n - 1][k - 1] = _exact_int(p.coeffs[n] * factorial(n) / kf, (n, k))
    return TriangularMatrix(tuple(tuple(r) for r in rows))


def build_matrix(spec: RestrictedNumberSpec, N: int, cap: int = MATRIX_CAP) -> TriangularMatrix:
    if N < 1:
        raise NumbersError("N must be >= 1")
    if N > cap:
        raise NumbersError(f"N={N} exceeds cap={cap}")
    if 1 in spec.R:
        a = series_from_restriction(spec.R, spec.kind, spec.d, N)
    else:
        cs = [Fraction(0)] * (N + 1)
        for m in range(1, N + 1):
            cs[m] = Fraction(spec.block_weight(m), factorial(m))
        a = PowerSeries(tuple(cs))
    return _columns_from_egf(a, N)


def invert_triangular(M: TriangularMatrix) -> TriangularMatrix:
    """Exact inverse by forward substitution; every division must be exact."""
    N = M.size
    for n in range(1, N + 1):
        if M.entry(n, n) == 0:
            raise NumbersError(f"zero diagonal entry at {n}: matrix is not invertible")
    inv = [[0] * n for n in range(1, N + 1)]
    for k in range(1, N + 1):
        diag = M.entry(k, k)
        if 1 % diag:
            raise NumbersError(f"diagonal entry {diag} at {k} has no integral inverse")
        inv[k - 1][k - 1] = 1 // diag
        for n in range(k + 1, N + 1):
            s = sum(M.entry(n, j) * inv[j - 1][k - 1] for j in range(k, n))
            dn = M.entry(n, n)
            if s % dn:
                raise NumbersError(f"non-integral inverse entry at {(n, k)}")
            inv[n - 1][k - 1] = -s // dn
    return TriangularMatrix(tuple(tuple(r) for r in inv))


def reverted_sequence(spec: RestrictedNumberSpec, N: int) -> List[int]:
    """b_1..b_N, the exponential coefficients of the reversion of a(x)."""
    if 1 not in spec.R:
        raise NumbersError("1 must belong to R for the inverse to exist")
    b = revert(series_from_restriction(spec.R, spec.kind, spec.d, N))
    return [_exact_int(v, ("b", n)) for n, v in enumerate(b.egf()) if n >= 1]


def partition_sum_matrix(b: Sequence[int], N: int) -> TriangularMatrix:
    """b_{n,k} = sum over partitions of [n] into k blocks of prod b_{|P_i|}.

    Evaluated by splitting off the block containing the element 1:
    b_{n,k} = sum_j C(n-1, j-1) b_j b_{n-j,k-1}.
    """
    table: Dict = {(0, 0): 1}

    def get(n, k):
        return table.get((n, k), 0)

    for n in range(1, N + 1):
        for k in range(1, n + 1):
            table[(n, k)] = sum(
                comb(n - 1, j - 1) * b[j - 1] * get(n - j, k - 1) for j in range(1, n - k + 2)
            )
    return TriangularMatrix.from_function(N, get)


@lru_cache(maxsize=128)
def _inverse_both_routes(spec: RestrictedNumberSpec, N: int) -> TriangularMatrix:
    if 1 not in spec.R:
        raise NumbersError("1 must belong to R for the inverse to exist")
    by_substitution = invert_triangular(build_matrix(spec, N))
    by_reversion = partition_sum_matrix(reverted_sequence(spec, N), N)
    if by_substitution != by_reversion:
        raise NumbersError(f"inverse routes disagree for {spec.to_json()} at N={N}")
    return by_substitution


def inverse_matrix(spec: RestrictedNumberSpec, N: int) -> TriangularMatrix:
    return _inverse_both_routes(spec, N)


def inverse_entry(n: int, k: int, spec: RestrictedNumberSpec, N: int = None) -> int:
    """Entry (n, k) of the inverse of A_a, checked by both routes."""
    if N is None:
        N = n
    if not (1 <= k and 1 <= n <= N):
        raise NumbersError("need 1 <= n <= N and k >= 1")
    if k > n:
        return 0
    return _inverse_both_routes(spec, N).entry(n, k)


def count_matchings(vertices: int, size: int) -> int:
    """Brute-force count of ``size``-edge matchings in the complete graph."""

    def rec(free: tuple, need: int) -> int:
        if need == 0:
            return 1
        if len(free) < 2 * need:
            return 0
        first, rest = free[0], free[1:]
        # either the first free vertex stays unmatched, or it is matched to some partner
        total = rec(rest, need)
        for i in range(len(rest)):
            total += rec(rest[:i] + rest[i + 1:], need - 1)
        return total

    return rec(tuple(range(vertices)), size)


def bessel_matching_check(n: int, k: int, cap: int = BESSEL_CAP) -> bool:
    if not 1 <= k <= n:
        raise NumbersError("need 1 <= k <= n")
    if n > cap:
        raise NumbersError(f"n={n} exceeds cap={cap}")
    spec = RestrictedNumberSpec(RestrictionSet.initial(2), SequenceKind.SET, 1)
    value = (-1) ** (n - k) * inverse_entry(n, k, spec, n)
    return value == count_matchings(2 * n - 1 - k, n - k)


def naturals_spec(kind: SequenceKind = SequenceKind.SET, d: int = 1) -> RestrictedNumberSpec:
    return RestrictedNumberSpec(RestrictionSet.naturals(), kind, d)
