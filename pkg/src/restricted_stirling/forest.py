"""Leaf-labeled phylogenetic trees and forests with ordered children.

A tree is a nested tuple: a leaf is its integer label, an internal vertex
is the tuple of its children from left-most to right-most.  Vertices are
addressed by paths (tuples of child positions from the root).  A forest is
an unordered collection of trees, stored sorted by the root's largest leaf
label.

The unordered (phylogenetic) form of a tree is the one whose sibling lists
ascend by largest leaf label, which is exactly the increasing ordering.
"""
from __future__ import annotations

import enum
import json
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import permutations, product
from math import factorial, prod
from typing import Dict, Iterator, List, Optional, Sequence, Tuple, Union

from .partitions import set_partitions
from .restriction import (
    RestrictionError,
    RestrictionSet,
    endpoints,
    has_no_exposed_odds,
    stretch,
    unstretch_value,
)

Tree = Union[int, tuple]
Path = Tuple[int, ...]

TREE_CAP = 9
FOREST_CAP = 9
LINEAR_FOREST_CAP = 8


class ForestError(ValueError):
    pass


class OrderingKind(enum.Enum):
    INCREASING = "increasing"
    MIN_FIRST = "minfirst"
    LINEAR = "linear"


class Parity(enum.Enum):
    EVEN = "even"
    ODD = "odd"


class ClassFilter(enum.Enum):
    EVEN = "even"
    ODD = "odd"
    GOOD = "good"
    ALL = "all"


# -- basic tree queries -------------------------------------------------------

def is_leaf(t: Tree) -> bool:
    return not isinstance(t, tuple)


def leaves(t: Tree) -> List[int]:
    if is_leaf(t):
        return [t]
    out = []
    for c in t:
        out.extend(leaves(c))
    return out


def lmax(t: Tree) -> int:
    if is_leaf(t):
        return t
    return max(lmax(c) for c in t)


def lmin(t: Tree) -> int:
    if is_leaf(t):
        return t
    return min(lmin(c) for c in t)


def degree(t: Tree) -> int:
    return 0 if is_leaf(t) else len(t)


def vertices(t: Tree, path: Path = ()) -> Iterator[Tuple[Path, Tree]]:
    """Preorder (path, subtree) pairs."""
    yield path, t
    if not is_leaf(t):
        for i, c in enumerate(t):
            yield from vertices(c, path + (i,))


def internal_degrees(t: Tree) -> Iterator[int]:
    for _, v in vertices(t):
        if not is_leaf(v):
            yield len(v)


def subtree_at(t: Tree, path: Path) -> Tree:
    for i in path:
        t = t[i]
    return t


def replace_at(t: Tree, path: Path, new: Tree) -> Tree:
    if not path:
        return new
    i = path[0]
    return t[:i] + (replace_at(t[i], path[1:], new),) + t[i + 1:]


def relabel(t: Tree, mapping) -> Tree:
    if is_leaf(t):
        return mapping[t]
    return tuple(relabel(c, mapping) for c in t)


def rank_compress(t: Tree) -> Tuple[Tree, Dict[int, int]]:
    """Relabel leaves to 1..m preserving order; also return the inverse map."""
    labels = sorted(leaves(t))
    forward = {lab: i for i, lab in enumerate(labels, start=1)}
    backward = {i: lab for lab, i in forward.items()}
    return relabel(t, forward), backward


def canonical(t: Tree) -> Tree:
    """Unordered form: every sibling list sorted by largest leaf label."""
    if is_leaf(t):
        return t
    return tuple(sorted((canonical(c) for c in t), key=lmax))


def is_phylogenetic(t: Tree) -> bool:
    return all(is_leaf(v) or len(v) >= 2 for _, v in vertices(t))


def is_ordered(t: Tree, kind: OrderingKind) -> bool:
    """Whether every sibling list satisfies the ordering discipline."""
    if kind is OrderingKind.LINEAR:
        return True
    for _, v in vertices(t):
        if is_leaf(v):
            continue
        if kind is OrderingKind.INCREASING:
            keys = [lmax(c) for c in v]
            if any(a >= b for a, b in zip(keys, keys[1:])):
                return False
        else:
            first = lmin(v[0])
            if any(lmin(c) < first for c in v[1:]):
                return False
    return True


def internal_sequence(t: Tree, d: int) -> List[int]:
    """n_i with d(v_i) = s_d(n_i), over the internal vertices in preorder."""
    out = []
    for deg in internal_degrees(t):
        n = unstretch_value(deg, d)
        if n is None:
            raise ForestError(f"degree {deg} is not of the form d(n-1)+1 for d={d}")
        out.append(n)
    return out


def tree_parity(t: Tree, d: int = 1) -> Parity:
    return Parity.EVEN if sum(internal_sequence(t, d)) % 2 == 0 else Parity.ODD


def degrees_in(t: Tree, R: RestrictionSet, d: int) -> bool:
    Rd = stretch(R, d)
    return all(deg in Rd for deg in internal_degrees(t))


@dataclass(frozen=True)
class Forest:
    trees: tuple

    def __post_init__(self):
        object.__setattr__(self, "trees", tuple(sorted(self.trees, key=lmax)))

    @property
    def k(self) -> int:
        return len(self.trees)

    @property
    def n(self) -> int:
        return sum(len(leaves(t)) for t in self.trees)

    def labels(self) -> List[int]:
        return sorted(lab for t in self.trees for lab in leaves(t))

    def is_proper(self) -> bool:
        return self.labels() == list(range(1, self.n + 1))

    def parity(self, d: int = 1) -> Parity:
        total = sum(sum(internal_sequence(t, d)) for t in self.trees)
        return Parity.EVEN if total % 2 == 0 else Parity.ODD


# -- left-odd ancestry and goodness ----------------------------------------------

def left_chain_length(t: Tree, path: Path, d: int) -> int:
    """Length k of the maximal chain v_1..v_k = v of left-most children of
    degree-(d+1) vertices ending at v."""
    k = 1
    cur = path
    while cur:
        parent = cur[:-1]
        if cur[-1] == 0 and degree(subtree_at(t, parent)) == d + 1:
            k += 1
            cur = parent
        else:
            break
    return k


def has_left_odd_ancestry(F, v, d: int = 1) -> bool:
    """s_d(2)-left-odd ancestry of vertex ``v``.

    ``F`` is a tree with ``v`` a path, or a ``Forest`` with ``v`` a pair
    (component index, path).
    """
    if isinstance(F, Forest):
        comp, path = v
        return left_chain_length(F.trees[comp], tuple(path), d) % 2 == 0
    return left_chain_length(F, tuple(v), d) % 2 == 0


def _check_good_preconditions(R: RestrictionSet) -> None:
    if 1 not in R:
        raise RestrictionError("goodness needs 1 in R")
    if not has_no_exposed_odds(R):
        raise RestrictionError(f"R = {R} has exposed odds")


@dataclass(frozen=True)
class GoodnessRule:
    """Degrees allowed at a vertex, depending on whether it has
    s_d(2)-left-odd ancestry.  Built from R without validation so the
    involution can be explored on any R."""

    d: int
    plain: frozenset   # stretched {2} union a(R)
    odd_ancestry: frozenset  # stretched b(R)

    @classmethod
    def from_restriction(cls, R: RestrictionSet, d: int) -> "GoodnessRule":
        ep = endpoints(R)
        s = lambda n: d * (n - 1) + 1  # noqa: E731
        return cls(d, frozenset({d + 1} | {s(a) for a in ep.a_set}), frozenset(s(b) for b in ep.b_set))

    def allows(self, deg: int, ancestry: bool) -> bool:
        return deg in (self.odd_ancestry if ancestry else self.plain)


def _is_good_rule(t: Tree, rule: GoodnessRule, chain: int = 1) -> bool:
    if is_leaf(t):
        return True
    deg = len(t)
    if not rule.allows(deg, chain % 2 == 0):
        return False
    for i, c in enumerate(t):
        nxt = chain + 1 if (i == 0 and deg == rule.d + 1) else 1
        if not _is_good_rule(c, rule, nxt):
            return False
    return True


def is_good(F, R: RestrictionSet, d: int = 1) -> bool:
    """R(d)-goodness of a tree or forest with ordered children."""
    _check_good_preconditions(R)
    rule = GoodnessRule.from_restriction(R, d)
    trees = F.trees if isinstance(F, Forest) else (F,)
    return all(_is_good_rule(t, rule) for t in trees)


def is_good_unchecked(t: Tree, R: RestrictionSet, d: int = 1) -> bool:
    return _is_good_rule(t, GoodnessRule.from_restriction(R, d))


def is_good_via_claim3(F, R: RestrictionSet, d: int = 1) -> bool:
    """Goodness with 'left-odd ancestry' replaced by 'left-most child of a
    degree-(d+1) vertex'; valid when 3 is in R."""
    if 3 not in R:
        raise RestrictionError("the simplified criterion needs 3 in R")
    _check_good_preconditions(R)
    rule = GoodnessRule.from_restriction(R, d)

    def ok(t, leftmost_of_pair):
        if is_leaf(t):
            return True
        deg = len(t)
        if not rule.allows(deg, leftmost_of_pair):
            return False
        return all(ok(c, i == 0 and deg == d + 1) for i, c in enumerate(t))

    trees = F.trees if isinstance(F, Forest) else (F,)
    return all(ok(t, False) for t in trees)


# -- enumeration -------------------------------------------------------------------

@dataclass(frozen=True)
class DegreePolicy:
    """Which down-degrees a generated vertex may take.

    With ``rule`` set only good trees are generated; ``state`` passed to
    the generator is then the vertex's left-odd-ancestry flag.
    """

    R: RestrictionSet
    d: int = 1
    rule: Optional[GoodnessRule] = None

    def allowed(self, deg: int, ancestry: bool) -> bool:
        if deg not in stretch(self.R, self.d):
            return False
        return self.rule is None or self.rule.allows(deg, ancestry)


ALL_TREES = DegreePolicy(RestrictionSet.naturals(), 1)


def _block_orderings(blocks: tuple, kind: OrderingKind) -> Iterator[tuple]:
    if kind is OrderingKind.INCREASING:
        yield tuple(sorted(blocks, key=lambda b: b[-1]))
    elif kind is OrderingKind.MIN_FIRST:
        # blocks come ordered by least element, so blocks[0] holds the minimum
        for rest in permutations(blocks[1:]):
            yield (blocks[0],) + rest
    else:
        yield from permutations(blocks)


def _generate(labels: tuple, kind: OrderingKind, policy: DegreePolicy, ancestry: bool) -> Iterator[Tree]:
    m = len(labels)
    if m == 1:
        yield labels[0]
        return
    d = policy.d
    if (m - 1) % d:
        return
    size_ok = (lambda s: (s - 1) % d == 0) if d > 1 else None
    for deg in range(2, m + 1):
        if not policy.allowed(deg, ancestry):
            continue
        flips = policy.rule is not None and deg == d + 1
        for blocks in set_partitions(labels, deg, size_ok):
            for ordered in _block_orderings(blocks, kind):
                choices = []
                for i, b in enumerate(ordered):
                    child_state = (not ancestry) if (flips and i == 0) else False
                    sub = _cached_trees(b, kind, policy, child_state)
                    if not sub:
                        break
                    choices.append(sub)
                else:
                    for kids in product(*choices):
                        yield kids


@lru_cache(maxsize=None)
def _cached_trees(labels: tuple, kind: OrderingKind, policy: DegreePolicy, ancestry: bool) -> tuple:
    return tuple(_generate(labels, kind, policy, ancestry))


def clear_caches() -> None:
    _cached_trees.cache_clear()
    _tree_tallies.cache_clear()
    _degree_profiles.cache_clear()


def decorated_trees(
    labels: Sequence[int],
    kind: OrderingKind,
    R: RestrictionSet,
    d: int = 1,
    good_only: bool = False,
) -> Iterator[Tree]:
    """Stream every ordered tree on ``labels`` with degrees in R(d).

    With ``good_only`` the search is pruned to R(d)-good trees.
    """
    rule = None
    if good_only:
        _check_good_preconditions(R)
        rule = GoodnessRule.from_restriction(R, d)
    policy = DegreePolicy(R, d, rule)
    # the top level streams; only proper sub-blocks are cached
    yield from _generate(tuple(sorted(labels)), kind, policy, False)


def enumerate_trees(n: int, cap: int = TREE_CAP) -> List[Tree]:
    """All phylogenetic trees on leaves 1..n, one canonical form each."""
    if n < 1:
        raise ForestError("n must be >= 1")
    if n > cap:
        raise ForestError(f"n={n} exceeds tree cap {cap}")
    return list(_generate(tuple(range(1, n + 1)), OrderingKind.INCREASING, ALL_TREES, False))


def decorations(t: Tree, kind: OrderingKind) -> Iterator[Tree]:
    """All sibling orderings of an unordered tree obeying ``kind``.

    Brute force: every permutation of every sibling list, filtered by the
    discipline.  Independent of the generator above.
    """
    if is_leaf(t):
        yield t
        return
    child_options = [list(decorations(c, kind)) for c in t]
    for perm in permutations(range(len(t))):
        for kids in product(*(child_options[i] for i in perm)):
            cand = tuple(kids)
            if _siblings_ok(cand, kind):
                yield cand


def _siblings_ok(v: tuple, kind: OrderingKind) -> bool:
    if kind is OrderingKind.INCREASING:
        keys = [lmax(c) for c in v]
        return all(a < b for a, b in zip(keys, keys[1:]))
    if kind is OrderingKind.MIN_FIRST:
        first = lmin(v[0])
        return all(lmin(c) > first for c in v[1:])
    return True


def decoration_count(t: Tree, kind: OrderingKind) -> int:
    """1, prod (d(v)-1)!, prod d(v)! for the three disciplines."""
    if kind is OrderingKind.INCREASING:
        return 1
    if kind is OrderingKind.MIN_FIRST:
        return prod(factorial(deg - 1) for deg in internal_degrees(t))
    return prod(factorial(deg) for deg in internal_degrees(t))


def _forest_cap(kind: OrderingKind) -> int:
    return LINEAR_FOREST_CAP if kind is OrderingKind.LINEAR else FOREST_CAP


def enumerate_decorated_forests(
    n: int,
    k: int,
    kind: OrderingKind,
    R: RestrictionSet,
    d: int = 1,
    good_only: bool = False,
    cap: Optional[int] = None,
) -> Iterator[Tuple[Forest, Parity]]:
    """Stream (forest, parity) over the class with degrees in R(d)."""
    cap = _forest_cap(kind) if cap is None else cap
    if n > cap:
        raise ForestError(f"n={n} exceeds forest cap {cap}")
    if not 1 <= k <= n:
        return
    rule = None
    if good_only:
        _check_good_preconditions(R)
        rule = GoodnessRule.from_restriction(R, d)
    policy = DegreePolicy(R, d, rule)
    size_ok = (lambda s: (s - 1) % d == 0) if d > 1 else None
    for blocks in set_partitions(range(1, n + 1), k, size_ok):
        choices = [_cached_trees(b, kind, policy, False) for b in blocks]
        for trees in product(*choices):
            F = Forest(trees)
            yield F, F.parity(d)


# -- counting ----------------------------------------------------------------------

@lru_cache(maxsize=None)
def _tree_tallies(m: int, kind: OrderingKind, R: RestrictionSet, d: int, good: bool) -> Tuple[int, int]:
    """(even, odd) counts of ordered trees on m labeled leaves.

    Good trees are generated directly (pruned search).  Otherwise every
    unordered tree with degrees in R(d) is enumerated once and weighted by
    its number of decorations, all of which share its parity.
    """
    labels = tuple(range(1, m + 1))
    even = odd = 0
    if good:
        for t in decorated_trees(labels, kind, R, d, good_only=True):
            if tree_parity(t, d) is Parity.EVEN:
                even += 1
            else:
                odd += 1
        return even, odd
    policy = DegreePolicy(R, d)
    for t in _generate(labels, OrderingKind.INCREASING, policy, False):
        c = decoration_count(t, kind)
        if tree_parity(t, d) is Parity.EVEN:
            even += c
        else:
            odd += c
    return even, odd


def count_class(
    n: int,
    k: int,
    kind: OrderingKind,
    R: RestrictionSet,
    d: int = 1,
    filter: ClassFilter = ClassFilter.ALL,
    method: str = "tally",
    cap: Optional[int] = None,
) -> int:
    """Cardinality of a decorated forest class.

    ``method="tally"`` counts trees per block size once and combines them
    over the set partitions of [n]; ``method="stream"`` walks
    ``enumerate_decorated_forests`` one forest at a time.
    """
    cap = _forest_cap(kind) if cap is None else cap
    if n > cap:
        raise ForestError(f"n={n} exceeds forest cap {cap}")
    filter = ClassFilter(filter)
    good = filter is ClassFilter.GOOD
    if good:
        _check_good_preconditions(R)
    if method == "stream":
        total = 0
        for F, par in enumerate_decorated_forests(n, k, kind, R, d, good_only=good, cap=cap):
            if filter is ClassFilter.EVEN and par is not Parity.EVEN:
                continue
            if filter is ClassFilter.ODD and par is not Parity.ODD:
                continue
            total += 1
        return total
    if method != "tally":
        raise ForestError(f"unknown method {method!r}")
    if not 1 <= k <= n:
        return 0
    size_ok = (lambda s: (s - 1) % d == 0) if d > 1 else None
    tallies = {}
    even_total = odd_total = 0
    for blocks in set_partitions(range(1, n + 1), k, size_ok):
        both, signed = 1, 1
        for b in blocks:
            m = len(b)
            if m not in tallies:
                tallies[m] = _tree_tallies(m, kind, R, d, good)
            e, o = tallies[m]
            both *= e + o
            signed *= e - o
        even_total += (both + signed) // 2
        odd_total += (both - signed) // 2
    if filter is ClassFilter.EVEN:
        return even_total
    if filter is ClassFilter.ODD:
        return odd_total
    return even_total + odd_total


def signed_difference(
    n: int, k: int, kind: OrderingKind, R: RestrictionSet, d: int = 1, cap: Optional[int] = None
) -> int:
    """(-1)^(n-k) (|even| - |odd|)."""
    e = count_class(n, k, kind, R, d, ClassFilter.EVEN, cap=cap)
    o = count_class(n, k, kind, R, d, ClassFilter.ODD, cap=cap)
    return (-1) ** (n - k) * (e - o)


def signed_good_count(
    n: int, k: int, kind: OrderingKind, R: RestrictionSet, d: int = 1, cap: Optional[int] = None
) -> int:
    """(-1)^((n-k)/d) |good forests|; zero when d does not divide n-k."""
    if (n - k) % d:
        return 0
    return (-1) ** ((n - k) // d) * count_class(n, k, kind, R, d, ClassFilter.GOOD, cap=cap)


# -- Lagrange inversion by trees ----------------------------------------------------

def tree_weight(t: Tree, a: Sequence) -> Fraction:
    """w_a(T) = (-1)^m a_1^-(m+n) prod a_{d(v)}; ``a[i-1]`` holds a_i."""
    a1 = Fraction(a[0])
    if a1 == 0:
        raise ForestError("a_1 must be nonzero")
    degs = list(internal_degrees(t))
    n = len(leaves(t))
    m = len(degs)
    if degs and max(degs) > len(a):
        raise ForestError("sequence a is too short for this tree")
    w = Fraction((-1) ** m) / a1 ** (m + n)
    for deg in degs:
        w *= Fraction(a[deg - 1])
    return w


@lru_cache(maxsize=None)
def _degree_profiles(n: int) -> Tuple[Tuple[Tuple[int, ...], int], ...]:
    counts = Counter(tuple(sorted(internal_degrees(t))) for t in enumerate_trees(n, cap=LAGRANGE_CAP))
    return tuple(sorted(counts.items()))


LAGRANGE_CAP = 8


def lagrange_tree_sum(n: int, a: Sequence, cap: int = LAGRANGE_CAP) -> Fraction:
    """Sum of w_a over all phylogenetic trees on n leaves.

    Trees sharing a degree multiset have equal weight, so the sum runs over
    the enumerated trees grouped by that multiset.
    """
    if n > cap:
        raise ForestError(f"n={n} exceeds cap {cap}")
    a1 = Fraction(a[0])
    if a1 == 0:
        raise ForestError("a_1 must be nonzero")
    total = Fraction(0)
    for degs, count in _degree_profiles(n):
        if degs and max(degs) > len(a):
            raise ForestError("sequence a is too short")
        m = len(degs)
        w = Fraction((-1) ** m) / a1 ** (m + n)
        for deg in degs:
            w *= Fraction(a[deg - 1])
        total += count * w
    return total


# -- serialization -------------------------------------------------------------------

def tree_to_json(t: Tree) -> dict:
    """Vertex list in preorder: id, parent id, child rank, leaf label."""
    verts = []
    ids = {}
    for path, v in vertices(t):
        vid = len(verts)
        ids[path] = vid
        verts.append({
            "id": vid,
            "parent": ids[path[:-1]] if path else None,
            "rank": path[-1] if path else 0,
            "label": v if is_leaf(v) else None,
        })
    return {"vertices": verts}


def tree_from_json(data) -> Tree:
    if isinstance(data, str):
        data = json.loads(data)
    verts = data["vertices"] if isinstance(data, dict) else data
    kids: Dict[int, list] = {}
    root = None
    by_id = {}
    for v in verts:
        by_id[v["id"]] = v
        if v["parent"] is None:
            if root is not None:
                raise ForestError("more than one root")
            root = v["id"]
        else:
            kids.setdefault(v["parent"], []).append((v["rank"], v["id"]))
    if root is None:
        raise ForestError("no root")

    def build(vid):
        if vid not in kids:
            lab = by_id[vid]["label"]
            if lab is None:
                raise ForestError(f"leaf {vid} has no label")
            return int(lab)
        ranks = sorted(kids[vid])
        if [r for r, _ in ranks] != list(range(len(ranks))):
            raise ForestError(f"vertex {vid} has gaps in child ranks")
        return tuple(build(c) for _, c in ranks)

    return build(root)


def forest_to_json(F: Forest) -> dict:
    return {"n": F.n, "k": F.k, "trees": [tree_to_json(t) for t in F.trees]}


def forest_from_json(data) -> Forest:
    if isinstance(data, str):
        data = json.loads(data)
    return Forest(tuple(tree_from_json(t) for t in data["trees"]))


def tree_to_dot(t: Tree, name: str = "T") -> str:
    lines = [f"digraph {name} {{", "  node [shape=circle];"]
    ids = {}
    for path, v in vertices(t):
        vid = f"{name}_{len(ids)}"
        ids[path] = vid
        label = str(v) if is_leaf(v) else ""
        lines.append(f'  {vid} [label="{label}"];')
        if path:
            lines.append(f"  {ids[path[:-1]]} -> {vid};")
    lines.append("}")
    return "\n".join(lines)


def forest_to_dot(F: Forest, name: str = "F") -> str:
    body = []
    for i, t in enumerate(F.trees):
        body.extend(tree_to_dot(t, f"{name}{i}").splitlines()[2:-1])
    return "\n".join([f"digraph {name} {{", "  node [shape=circle];", *body, "}"])
