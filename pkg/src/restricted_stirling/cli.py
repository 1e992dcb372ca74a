"""Command-line front end.

Exit codes: 0 success, 1 a verification found a counterexample, 2 usage error.
"""
from __future__ import annotations

import argparse
import ast
import csv
import io
import json
import sys
from typing import List, Optional, Sequence

from . import acceptance
from .forest import (
    ClassFilter,
    ForestError,
    OrderingKind,
    Tree,
    count_class,
    signed_difference,
    signed_good_count,
    tree_from_json,
)
from .involution import show, verify_lemma4
from .numbers import NumbersError, RestrictedNumberSpec, build_matrix, inverse_matrix, restricted_number_oracle
from .poset import PosetError, build_poset, whitney_first, whitney_second
from .restriction import RestrictionError, RestrictionSet, has_no_exposed_odds, parse_restriction
from .series import SequenceKind, SeriesError, first_alternation_failure, revert, series_from_restriction

USAGE_ERRORS = (RestrictionError, NumbersError, SeriesError, ForestError, PosetError, ValueError)


class UsageError(Exception):
    pass


def _restriction(args):
    if args.R is None:
        raise UsageError("--R is required")
    return parse_restriction(args.R)


def _need(args, *names):
    for name in names:
        if getattr(args, name) is None:
            raise UsageError(f"--{name} is required")


def _rows_out(args, header: Sequence[str], rows: List[Sequence]) -> str:
    if args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)
        return buf.getvalue()
    if args.format == "json":
        return json.dumps([{h: str(v) if isinstance(v, int) and not isinstance(v, bool) else v
                            for h, v in zip(header, r)} for r in rows], indent=1) + "\n"
    widths = [max(len(str(x)) for x in col) for col in zip(header, *rows)]
    lines = ["  ".join(str(x).rjust(w) for x, w in zip(r, widths)) for r in [header, *rows]]
    return "\n".join(lines) + "\n"


def _matrix_out(args, M, spec) -> str:
    if args.format == "csv":
        return M.to_csv()
    if args.format == "json":
        return json.dumps(M.to_json(spec)) + "\n"
    width = max(len(str(v)) for row in M.rows for v in row)
    return "\n".join(" ".join(str(v).rjust(width) for v in row) for row in M.rows) + "\n"


def _spec(args) -> RestrictedNumberSpec:
    return RestrictedNumberSpec(_restriction(args), SequenceKind(args.kind), args.d)


def cmd_table(args):
    _need(args, "N")
    spec = _spec(args)
    M = build_matrix(spec, args.N)
    if args.n is not None:
        _need(args, "k")
        return 0, f"{M.entry(args.n, args.k)}\n"
    return 0, _matrix_out(args, M, spec)


def cmd_inverse(args):
    spec = _spec(args)
    N = args.N if args.N is not None else args.n
    if N is None:
        raise UsageError("--N or --n is required")
    M = inverse_matrix(spec, N)
    if args.n is not None:
        _need(args, "k")
        value = M.entry(args.n, args.k)
        if args.format == "json":
            return 0, json.dumps({"spec": spec.to_json(), "n": args.n, "k": args.k, "value": str(value)}) + "\n"
        return 0, f"{value}\n"
    return 0, _matrix_out(args, M, spec)


def cmd_forests(args):
    _need(args, "n")
    R = _restriction(args)
    order = OrderingKind(args.order)
    cap = args.cap
    ks = [args.k] if args.k is not None else list(range(1, args.n + 1))
    good_ok = 1 in R and has_no_exposed_odds(R)
    kind = acceptance.KIND_FOR_ORDER[order]
    inv = inverse_matrix(RestrictedNumberSpec(R, kind, args.d), args.n) if 1 in R else None
    header = ["n", "k", "all", "even", "odd", "good", "signed_difference", "signed_good", "inverse"]
    rows = []
    for k in ks:
        even = count_class(args.n, k, order, R, args.d, ClassFilter.EVEN, cap=cap)
        odd = count_class(args.n, k, order, R, args.d, ClassFilter.ODD, cap=cap)
        good = count_class(args.n, k, order, R, args.d, ClassFilter.GOOD, cap=cap) if good_ok else "-"
        sgood = signed_good_count(args.n, k, order, R, args.d, cap=cap) if good_ok else "-"
        rows.append([args.n, k, even + odd, even, odd, good,
                     signed_difference(args.n, k, order, R, args.d, cap=cap), sgood,
                     inv.entry(args.n, k) if inv else "-"])
    return 0, _rows_out(args, header, rows)


def _to_tree(obj) -> Tree:
    if isinstance(obj, int):
        return obj
    if isinstance(obj, (list, tuple)):
        return tuple(_to_tree(x) for x in obj)
    raise UsageError(f"cannot read a tree from {obj!r}")


def parse_tree(text: str) -> Tree:
    """A nested tuple/list literal such as ((3,2),1), or the JSON vertex list."""
    text = text.strip()
    if text.startswith("{"):
        return tree_from_json(text)
    try:
        return _to_tree(ast.literal_eval(text))
    except (SyntaxError, ValueError) as exc:
        raise UsageError(f"malformed tree: {exc}") from None


def cmd_involution_show(args):
    _need(args, "tree")
    t = parse_tree(args.tree)
    report = show(t, _restriction(args), args.d, OrderingKind(args.order))
    if args.format == "json":
        return 0, json.dumps(report, indent=1) + "\n"
    steps = ", ".join(s["kind"] + ("" if s["site"] is None else f"@{s['site']}") for s in report["trace"])
    out = [
        f"input:  {t!r}",
        f"output: {_tree_of(report)!r}",
        f"fixed:  {str(report['fixed']).lower()}",
        f"trace:  {steps}",
        report["dot_before"],
        report["dot_after"],
    ]
    return 0, "\n".join(out) + "\n"


def _tree_of(report) -> Tree:
    return tree_from_json(report["output"])


def cmd_involution_verify(args):
    _need(args, "n")
    kwargs = {} if args.cap is None else {"cap": args.cap}
    rep = verify_lemma4(args.n, _restriction(args), args.d, OrderingKind(args.order), **kwargs)
    if args.format == "json":
        text = json.dumps(rep.to_json(), indent=1) + "\n"
    else:
        header = ["property", "failures"]
        text = _rows_out(args, header, [[p, c] for p, c in rep.failures.items()])
        text += f"trees checked: {rep.trees_checked}, fixed points: {rep.fixed_points}, ok: {str(rep.ok).lower()}\n"
        if rep.first_counterexample:
            text += f"first counterexample: {rep.first_counterexample}\n"
    return (0 if rep.ok else 1), text


def cmd_whitney(args):
    _need(args, "n")
    P = build_poset(args.n, args.d, args.cap)
    spec = RestrictedNumberSpec(RestrictionSet.naturals(), SequenceKind.SET, args.d)
    inv = inverse_matrix(spec, args.n)
    ks = [args.k] if args.k is not None else list(range((args.n - 1) // args.d + 1))
    rows, ok = [], True
    for k in ks:
        W, w = whitney_second(P, k), whitney_first(P, k)
        blocks = args.n - k * args.d
        if blocks >= 1:
            match = W == restricted_number_oracle(args.n, blocks, spec) and w == inv.entry(args.n, blocks)
        else:
            match = W == 0 and w == 0
        ok &= match
        rows.append([k, W, w, str(match).lower()])
    if args.format == "json":
        data = {"rows": [{"k": k, "W": str(W), "w": str(w), "matches": m == "true"} for k, W, w, m in rows],
                "poset": P.to_json()}
        return (0 if ok else 1), json.dumps(data) + "\n"
    return (0 if ok else 1), _rows_out(args, ["k", "W", "w", "matches"], rows)


def cmd_revert(args):
    _need(args, "N")
    R = _restriction(args)
    f = series_from_restriction(R, SequenceKind(args.kind), args.d, args.N)
    g = revert(f)
    if args.format == "json":
        return 0, json.dumps(g.to_json(egf=True)) + "\n"
    egf = g.egf()
    rows = [[n, str(g.coeffs[n]), str(egf[n])] for n in range(1, args.N + 1)]
    return 0, _rows_out(args, ["n", "coeff", "egf"], rows)


def cmd_scan_alternating(args):
    _need(args, "N")
    R = _restriction(args)
    g = revert(series_from_restriction(R, SequenceKind(args.kind), args.d, args.N))
    fail = first_alternation_failure(g, args.d)
    alternating = fail is None
    if args.format == "json":
        return 0, json.dumps({"R": args.R, "kind": args.kind, "d": args.d, "order": args.N,
                              "alternating": alternating, "first_failure": fail}) + "\n"
    text = f"alternating through order {args.N}: {str(alternating).lower()}\n"
    if fail is not None:
        text += f"first failure at n = {fail}\n"
    return 0, text


def cmd_verify_all(args):
    only = None
    if args.only:
        try:
            only = {int(x) for x in args.only.split(",")}
        except ValueError:
            raise UsageError("--only takes a comma-separated list of criterion numbers") from None
    lines, ok = [], True
    for c in acceptance.CRITERIA:
        if only is not None and c.number not in only:
            continue
        passed, detail, seconds = acceptance.run_criterion(c, seed=args.seed, order=args.cap)
        ok &= passed
        lines.append(acceptance.format_line(c, passed, detail))
        print(f"criterion {c.number}: {seconds:.1f}s", file=sys.stderr)
    return (0 if ok else 1), "\n".join(lines) + "\n"


COMMANDS = {
    "table": cmd_table,
    "inverse": cmd_inverse,
    "forests": cmd_forests,
    "involution-show": cmd_involution_show,
    "involution-verify": cmd_involution_verify,
    "whitney": cmd_whitney,
    "revert": cmd_revert,
    "scan-alternating": cmd_scan_alternating,
    "verify-all": cmd_verify_all,
}


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return v


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="restricted-stirling", description="Restricted Stirling and Lah numbers, "
                                 "their inverses, forest counts and the parity involution.")
    ap.add_argument("command", choices=sorted(COMMANDS))
    ap.add_argument("--R", help="restriction set, e.g. 1,2,4-6 or 1- for all positive integers")
    ap.add_argument("--d", type=_positive, default=1, help="stretch parameter (default 1)")
    ap.add_argument("--kind", choices=[k.value for k in SequenceKind], default="set")
    ap.add_argument("--order", choices=[o.value for o in OrderingKind], default="increasing",
                    help="ordering discipline for trees and forests")
    ap.add_argument("--N", type=_positive, help="matrix size or series order")
    ap.add_argument("--n", type=_positive)
    ap.add_argument("--k", type=int)
    ap.add_argument("--tree", help="tree as a nested literal like ((3,2),1) or JSON")
    ap.add_argument("--format", choices=["table", "csv", "json"], default="table")
    ap.add_argument("--out", help="write output here instead of stdout")
    ap.add_argument("--seed", type=int, default=0, help="seed for randomized suites")
    ap.add_argument("--cap", type=_positive, help="override enumeration caps (verify-all: reversion order)")
    ap.add_argument("--only", help="verify-all: comma-separated criterion numbers")
    return ap


def run(argv: Optional[List[str]] = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        code, text = COMMANDS[args.command](args)
    except (UsageError, *USAGE_ERRORS, IndexError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
