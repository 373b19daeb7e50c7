"""Command-line driver: check files, the example catalog, and property suites.

Exit codes partition outcomes: 0 all checks pass, 1 any check fails, 2 the
input cannot be parsed or validated (or usage is wrong), 3 at least one check
is underdetermined by the declared data (with no outright failure), 4 file
I/O failed.
"""

from __future__ import annotations

import argparse
import sys

from . import catalog, prop
from .dsl import check_requests, parse, run_check, validate
from .engine import SUBSET_READING_NOTE
from .errors import (
    HpdcalcError,
    MissingDisjointness,
    Underdetermined,
    UnresolvedBaseLocus,
    UnresolvedIntersection,
)
from .report import build_report, input_digest, stable_json

__all__ = ["main"]

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_INVALID = 2
EXIT_UNDERDETERMINED = 3
EXIT_IO = 4

# Checks that these raise are not decided by the declared data; they report
# as "underdetermined" rather than as hard errors or refutations.
_UNDERDETERMINED_KINDS = (
    Underdetermined,
    UnresolvedIntersection,
    MissingDisjointness,
    UnresolvedBaseLocus,
)


def _print_report(report: dict, out=None) -> None:
    out = sys.stdout if out is None else out
    for row in report["checks"]:
        if row["status"] == "pass":
            detail = f" (lhs = rhs = {row['lhs']})" if row["lhs"] != "" else ""
        elif row["status"] == "fail":
            detail = f" (lhs = {row['lhs']}, rhs = {row['rhs']}, witness = {row['witness']})"
        else:
            detail = f" ({'; '.join(row['notes'])})" if row["notes"] else ""
        print(f"check {row['name']}: {row['status']}{detail}", file=out)
    for sod in report["sods"]:
        blocks = ", ".join(
            f"{b['term']}({b['twist']}): {b['invariant']}" for b in sod["blocks"]
        )
        print(f"sod {sod['name']} over {sod['base']}: <{blocks}>", file=out)
    for warning in report["warnings"]:
        print(f"warning: {warning}", file=out)


def _write_json(report: dict, path: str) -> int:
    try:
        with open(path, "w", encoding="utf-8") as handle:
            handle.write(stable_json(report))
    except OSError as err:
        print(f"error: cannot write report: {err}", file=sys.stderr)
        return EXIT_IO
    return EXIT_PASS


def _exit_code_for(rows: list[dict]) -> int:
    statuses = {row["status"] for row in rows}
    if "fail" in statuses:
        return EXIT_FAIL
    if "underdetermined" in statuses:
        return EXIT_UNDERDETERMINED
    return EXIT_PASS


def cmd_check(args) -> int:
    try:
        with open(args.file, "r", encoding="utf-8") as handle:
            source = handle.read()
    except OSError as err:
        print(f"error: cannot read {args.file}: {err}", file=sys.stderr)
        return EXIT_IO

    try:
        ast = parse(source)
        ws = validate(ast, allow_nonmoderate=args.allow_nonmoderate)
    except HpdcalcError as err:
        print(f"{args.file}:{err}", file=sys.stderr)
        return EXIT_INVALID

    rows: list[dict] = []
    for stmt in check_requests(ast):
        try:
            rows.append(run_check(stmt, ws).to_json_dict())
        except _UNDERDETERMINED_KINDS as err:
            rows.append(
                {
                    "name": stmt.check,
                    "lhs": "",
                    "rhs": "",
                    "status": "underdetermined",
                    "witness": None,
                    "notes": [str(err)],
                }
            )
        except HpdcalcError as err:
            print(f"{args.file}: check {stmt.check}: {err}", file=sys.stderr)
            return EXIT_INVALID

    warnings = list(ws.warnings)
    if any(SUBSET_READING_NOTE in row["notes"] for row in rows):
        warnings.append(SUBSET_READING_NOTE)
    report = build_report(input_digest(source), rows, [], warnings)
    _print_report(report)
    if args.json:
        code = _write_json(report, args.json)
        if code:
            return code
    return _exit_code_for(rows)


def cmd_catalog(args) -> int:
    try:
        report, ok = catalog.run_catalog(
            [args.name] if args.name else None, update_golden=args.update_golden
        )
    except ValueError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_INVALID
    _print_report(report)
    if args.json:
        code = _write_json(report, args.json)
        if code:
            return code
    return EXIT_PASS if ok else EXIT_FAIL


def cmd_prop(args) -> int:
    try:
        suite = prop.run_suite(
            args.seed,
            args.cases,
            max_length=args.max_length,
            max_rank=args.max_rank_v,
            mutate_join_bound=args.mutate_join_bound,
        )
    except ValueError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_INVALID
    parameters = (
        f"prop seed={args.seed} cases={args.cases} max_length={args.max_length} "
        f"max_rank_v={args.max_rank_v} mutate_join_bound={args.mutate_join_bound}"
    )
    report = build_report(input_digest(parameters), suite.check_rows(), [], [])
    _print_report(report)
    if args.json:
        code = _write_json(report, args.json)
        if code:
            return code
    return EXIT_PASS if suite.all_passed() else EXIT_FAIL


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hpdcalc",
        description="Symbolic duality checks for Lefschetz categories.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    check = sub.add_parser("check", help="run the check statements of a declaration file")
    check.add_argument("file", help="declaration file (.hpd)")
    check.add_argument("--json", metavar="PATH", help="write the JSON report here")
    check.add_argument(
        "--allow-nonmoderate",
        action="store_true",
        help="admit profiles with length >= ambient rank for non-duality operations",
    )
    check.set_defaults(handler=cmd_check)

    cat = sub.add_parser("catalog", help="run built-in worked examples against goldens")
    cat.add_argument("name", nargs="?", help="single case to run (default: all)")
    cat.add_argument("--json", metavar="PATH", help="write the JSON report here")
    cat.add_argument(
        "--update-golden",
        action="store_true",
        help="rewrite the stored golden files from this run",
    )
    cat.set_defaults(handler=cmd_catalog)

    prop_cmd = sub.add_parser("prop", help="run seeded property suites")
    prop_cmd.add_argument("--seed", type=int, default=1)
    prop_cmd.add_argument("--cases", type=int, default=100)
    prop_cmd.add_argument("--max-length", type=int, default=5, metavar="M")
    prop_cmd.add_argument("--max-rank-v", type=int, default=9, metavar="K")
    prop_cmd.add_argument("--json", metavar="PATH", help="write the JSON report here")
    prop_cmd.add_argument(
        "--mutate-join-bound",
        action="store_true",
        help="flip the refined-pair bound (negative control; must fail)",
    )
    prop_cmd.set_defaults(handler=cmd_prop)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    return args.handler(args)


if __name__ == "__main__":
    sys.exit(main())
