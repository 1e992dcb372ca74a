"""The poset of partitions of [n] whose block sizes are all 1 mod d.

Elements are stored canonically: each block a sorted tuple, blocks sorted
by their minimum.  The Moebius function from the bottom element is
computed directly by mu(0, x) = -sum_{y < x} mu(0, y), walking ranks
upwards and generating the refinements of each element block by block.
"""
from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product
from typing import Dict, List, Tuple

from .partitions import set_partitions

ModPartition = Tuple[Tuple[int, ...], ...]

POSET_CAP_D1 = 9
POSET_CAP = 11


class PosetError(ValueError):
    pass


def _size_ok(d: int):
    return lambda s: (s - 1) % d == 0


def canonical_partition(blocks) -> ModPartition:
    return tuple(sorted((tuple(sorted(b)) for b in blocks), key=lambda b: b[0]))


def is_mod_partition(p: ModPartition, n: int, d: int) -> bool:
    seen = sorted(x for b in p for x in b)
    return seen == list(range(1, n + 1)) and all((len(b) - 1) % d == 0 for b in p)


def leq(sigma: ModPartition, tau: ModPartition) -> bool:
    """Refinement order: every block of sigma lies inside a block of tau."""
    where = {x: i for i, b in enumerate(tau) for x in b}
    return all(len({where[x] for x in b}) == 1 for b in sigma)


@lru_cache(maxsize=None)
def _block_refinements(block: Tuple[int, ...], d: int) -> Tuple[ModPartition, ...]:
    return tuple(set_partitions(block, size_ok=_size_ok(d)))


def refinements(p: ModPartition, d: int):
    """All elements below or equal to p."""
    for choice in product(*(_block_refinements(b, d) for b in p)):
        yield canonical_partition(b for part in choice for b in part)


@dataclass
class PosetStructure:
    n: int
    d: int
    elements: List[ModPartition]
    rank: Dict[ModPartition, int]
    mobius_from_bottom: Dict[ModPartition, int] = field(default_factory=dict)

    @property
    def bottom(self) -> ModPartition:
        return tuple((i,) for i in range(1, self.n + 1))

    @property
    def max_rank(self) -> int:
        return max(self.rank.values())

    def leq(self, sigma: ModPartition, tau: ModPartition) -> bool:
        return leq(sigma, tau)

    def rank_counts(self) -> List[int]:
        c = Counter(self.rank.values())
        return [c[r] for r in range(self.max_rank + 1)]

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "d": self.d,
            "elements": [
                {"blocks": [list(b) for b in p], "rank": self.rank[p], "mobius": str(self.mobius_from_bottom[p])}
                for p in self.elements
            ],
        }


def poset_cap(d: int) -> int:
    return POSET_CAP_D1 if d == 1 else POSET_CAP


def build_poset(n: int, d: int = 1, cap: int = None) -> PosetStructure:
    if n < 1 or d < 1:
        raise PosetError("n and d must be positive")
    cap = poset_cap(d) if cap is None else cap
    if n > cap:
        raise PosetError(f"n={n} exceeds cap {cap}")
    elements = [canonical_partition(p) for p in set_partitions(range(1, n + 1), size_ok=_size_ok(d))]
    rank = {}
    for p in elements:
        r, rem = divmod(n - len(p), d)
        assert rem == 0
        rank[p] = r
    elements.sort(key=lambda p: (rank[p], p))
    mu: Dict[ModPartition, int] = {}
    for p in elements:
        if rank[p] == 0:
            mu[p] = 1
            continue
        mu[p] = -sum(mu[q] for q in refinements(p, d) if q != p)
    return PosetStructure(n, d, elements, rank, mu)


@lru_cache(maxsize=32)
def cached_poset(n: int, d: int = 1, cap: int = None) -> PosetStructure:
    return build_poset(n, d, cap)


def _as_rank(P: PosetStructure, k) -> int:
    """Whitney indices outside the nonnegative integers give -1 (empty)."""
    if isinstance(k, int) and k >= 0:
        return k
    if hasattr(k, "denominator") and k.denominator == 1 and k >= 0:
        return int(k)
    return -1


def whitney_second(P: PosetStructure, k) -> int:
    r = _as_rank(P, k)
    return sum(1 for p in P.elements if P.rank[p] == r)


def whitney_first(P: PosetStructure, k) -> int:
    r = _as_rank(P, k)
    return sum(P.mobius_from_bottom[p] for p in P.elements if P.rank[p] == r)


def mobius_row_sums_vanish(P: PosetStructure) -> bool:
    """sum over [0, tau] of mu(0, sigma) is 0 for every tau above the bottom."""
    mu = P.mobius_from_bottom
    return all(sum(mu[q] for q in refinements(p, P.d)) == 0 for p in P.elements if P.rank[p] > 0)


def upper_interval_rank_counts(P: PosetStructure, sigma: ModPartition) -> List[int]:
    base = P.rank[sigma]
    c = Counter(P.rank[t] - base for t in P.elements if P.rank[t] >= base and leq(sigma, t))
    return [c[r] for r in range(max(c) + 1)]


def orthogonality_sum(n: int, l: int, d: int, cap: int = None) -> int:
    """sum_k W_{(n-k)/d}(P_n) w_{(k-l)/d}(P_k); equals 1 iff n == l, else 0."""
    total = 0
    for k in range(l, n + 1):
        if (n - k) % d or (k - l) % d:
            continue
        total += whitney_second(cached_poset(n, d, cap), (n - k) // d) * whitney_first(
            cached_poset(k, d, cap), (k - l) // d
        )
    return total


def poset_to_json(P: PosetStructure) -> str:
    return json.dumps(P.to_json())
