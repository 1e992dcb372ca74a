"""The parity-toggling involution on ordered trees with degrees in R(d).

``apply_involution`` walks the right-most path top-down, contracting or
uncontracting at the first vertex that admits it; failing that it strips
the right-most path (plus the left-most children of its degree-(d+1)
vertices) and recurses into the leftover components in order of their
root label, changing the first component that is not fixed.
"""
from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

from .forest import (
    OrderingKind,
    Parity,
    Path,
    Tree,
    decorated_trees,
    degrees_in,
    is_good_unchecked,
    is_leaf,
    is_ordered,
    is_phylogenetic,
    lmax,
    lmin,
    rank_compress,
    relabel,
    replace_at,
    subtree_at,
    tree_parity,
    tree_to_dot,
    tree_to_json,
)
from .restriction import RestrictionError, RestrictionSet, endpoints, has_no_exposed_odds, stretch_value, unstretch_value

INVOLUTION_CAP = 8


class StepKind(enum.Enum):
    CONTRACT = "contract"
    UNCONTRACT = "uncontract"
    RECURSE = "recurse"
    FIX = "fix"


@dataclass(frozen=True)
class InvolutionStep:
    kind: StepKind
    site: Optional[Path] = None
    child_index: Optional[int] = None

    def to_json(self) -> dict:
        return {
            "kind": self.kind.value,
            "site": None if self.site is None else list(self.site),
            "child_index": self.child_index,
        }


def trace_to_json(trace: List[InvolutionStep]) -> str:
    return json.dumps([s.to_json() for s in trace])


def _involution(t: Tree, a_set, b_set, d: int, kind: OrderingKind, base: Path):
    if is_leaf(t):
        return t, [InvolutionStep(StepKind.FIX)]

    rightmost = []  # (path, vertex) for v_1 .. v_{k-1}
    path: Path = ()
    node = t
    while not is_leaf(node):
        rightmost.append((path, node))
        path = path + (len(node) - 1,)
        node = node[-1]

    # initial phase
    for p, v in rightmost:
        deg = len(v)
        if deg == d + 1:
            left = v[0]
            if not is_leaf(left) and unstretch_value(len(left), d) not in b_set:
                merged = tuple(left) + v[1:]
                return replace_at(t, p, merged), [InvolutionStep(StepKind.CONTRACT, base + p)]
        else:
            n = unstretch_value(deg, d)
            if n is not None and n > 2 and n not in a_set:
                cut = stretch_value(n - 1, d)
                split = (v[:cut],) + v[cut:]
                return replace_at(t, p, split), [InvolutionStep(StepKind.UNCONTRACT, base + p)]

    # recursive phase
    removed = {p for p, _ in rightmost}
    removed.add(path)  # the leaf v_k
    for p, v in rightmost:
        if len(v) == d + 1:
            removed.add(p + (0,))
    components = []
    for p in removed:
        v = subtree_at(t, p)
        if is_leaf(v):
            continue
        for i in range(len(v)):
            cp = p + (i,)
            if cp not in removed:
                components.append(cp)
    key = lmin if kind is OrderingKind.MIN_FIRST else lmax
    components.sort(key=lambda cp: key(subtree_at(t, cp)))
    for idx, cp in enumerate(components):
        sub = subtree_at(t, cp)
        if is_leaf(sub):
            continue
        compressed, restore = rank_compress(sub)
        image, steps = _involution(compressed, a_set, b_set, d, kind, base + cp)
        if image != compressed:
            new_t = replace_at(t, cp, relabel(image, restore))
            return new_t, [InvolutionStep(StepKind.RECURSE, base + cp, idx)] + steps
    return t, [InvolutionStep(StepKind.FIX)]


def check_input(t: Tree, R: RestrictionSet, d: int, kind: OrderingKind) -> None:
    if 1 not in R:
        raise RestrictionError("1 must belong to R")
    if not has_no_exposed_odds(R):
        raise RestrictionError(f"R = {R} has exposed odds")
    if not is_phylogenetic(t):
        raise ValueError("tree has a vertex with exactly one child")
    if not degrees_in(t, R, d):
        raise ValueError("tree has a down-degree outside R(d)")
    if not is_ordered(t, kind):
        raise ValueError(f"tree is not {kind.value} ordered")


def apply_involution(
    t: Tree, R: RestrictionSet, d: int = 1, kind: OrderingKind = OrderingKind.LINEAR, check: bool = True
) -> Tuple[Tree, List[InvolutionStep]]:
    """Return (A(t), trace).  ``check=False`` skips input validation."""
    if check:
        check_input(t, R, d, kind)
    ep = endpoints(R)
    return _involution(t, ep.a_set, ep.b_set, d, kind, ())


def recursive_phase_components(t: Tree, R: RestrictionSet, d: int = 1) -> Optional[List[Path]]:
    """Paths (in t) of the component roots left by the recursive phase,
    or None when the initial phase applies."""
    ep = endpoints(R)
    if is_leaf(t):
        return []
    rightmost = []
    path: Path = ()
    node = t
    while not is_leaf(node):
        rightmost.append((path, node))
        path = path + (len(node) - 1,)
        node = node[-1]
    for p, v in rightmost:
        deg = len(v)
        if deg == d + 1:
            if not is_leaf(v[0]) and unstretch_value(len(v[0]), d) not in ep.b_set:
                return None
        else:
            n = unstretch_value(deg, d)
            if n is not None and n > 2 and n not in ep.a_set:
                return None
    removed = {p for p, _ in rightmost} | {path}
    removed |= {p + (0,) for p, v in rightmost if len(v) == d + 1}
    out = []
    for p in sorted(removed):
        v = subtree_at(t, p)
        if not is_leaf(v):
            out.extend(p + (i,) for i in range(len(v)) if p + (i,) not in removed)
    return out


@dataclass
class InvolutionReport:
    n: int
    R: str
    d: int
    kind: str
    trees_checked: int = 0
    fixed_points: int = 0
    odd_fixed_points: int = 0  # zero whenever R has no exposed odds
    failures: dict = field(default_factory=lambda: {
        "fixed_iff_good": 0,
        "degrees_in_R(d)": 0,
        "ordering_preserved": 0,
        "involution": 0,
        "parity_toggle": 0,
        "trace_pairing": 0,
    })
    first_counterexample: Optional[dict] = None

    @property
    def ok(self) -> bool:
        return not any(self.failures.values())

    def to_json(self) -> dict:
        return {
            "n": self.n, "R": self.R, "d": self.d, "kind": self.kind,
            "trees_checked": self.trees_checked, "fixed_points": self.fixed_points,
            "odd_fixed_points": self.odd_fixed_points,
            "failures": dict(self.failures), "ok": self.ok,
            "first_counterexample": self.first_counterexample,
        }


_PAIRED = {StepKind.CONTRACT: StepKind.UNCONTRACT, StepKind.UNCONTRACT: StepKind.CONTRACT}


def verify_lemma4(
    n: int, R: RestrictionSet, d: int = 1, kind: OrderingKind = OrderingKind.LINEAR, cap: int = INVOLUTION_CAP
) -> InvolutionReport:
    """Exhaustively check the involution on every tree with at most n leaves.

    R with exposed odds is accepted for exploration; failures are then
    reported rather than raised.
    """
    if n > cap:
        raise ValueError(f"n={n} exceeds cap {cap}")
    if 1 not in R:
        raise RestrictionError("1 must belong to R")
    from .restriction import format_restriction

    report = InvolutionReport(n, format_restriction(R), d, kind.value)
    ep = endpoints(R)

    def fail(prop, t, image):
        report.failures[prop] += 1
        if report.first_counterexample is None:
            report.first_counterexample = {"property": prop, "tree": repr(t), "image": repr(image)}

    for m in range(1, n + 1):
        for t in decorated_trees(range(1, m + 1), kind, R, d):
            report.trees_checked += 1
            image, trace = _involution(t, ep.a_set, ep.b_set, d, kind, ())
            fixed = image == t
            report.fixed_points += fixed
            if fixed and tree_parity(t, d) is Parity.ODD:
                report.odd_fixed_points += 1
            if fixed != is_good_unchecked(t, R, d):
                fail("fixed_iff_good", t, image)
            if not (is_phylogenetic(image) and degrees_in(image, R, d)):
                fail("degrees_in_R(d)", t, image)
                continue
            if not is_ordered(image, kind):
                fail("ordering_preserved", t, image)
            back, back_trace = _involution(image, ep.a_set, ep.b_set, d, kind, ())
            if back != t:
                fail("involution", t, image)
            if not fixed and tree_parity(image, d) == tree_parity(t, d):
                fail("parity_toggle", t, image)
            last = trace[-1]
            if last.kind in _PAIRED:
                mate = back_trace[-1]
                if mate.kind is not _PAIRED[last.kind] or mate.site != last.site or back_trace[:-1] != trace[:-1]:
                    fail("trace_pairing", t, image)
    return report


def show(t: Tree, R: RestrictionSet, d: int = 1, kind: OrderingKind = OrderingKind.LINEAR) -> dict:
    """Before/after DOT dumps, JSON forms and trace for one tree."""
    image, trace = apply_involution(t, R, d, kind)
    return {
        "input": tree_to_json(t),
        "output": tree_to_json(image),
        "fixed": image == t,
        "trace": [s.to_json() for s in trace],
        "dot_before": tree_to_dot(t, "T"),
        "dot_after": tree_to_dot(image, "AT"),
    }
