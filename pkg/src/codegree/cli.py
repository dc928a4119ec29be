"""Command line: ``codegree {list,compute,verify,chartab}``.

Exit codes: 0 success, 1 verification mismatch, 2 invalid input or I/O failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from pathlib import Path

from . import catalog
from .catalog import CatalogError, GroupId, build
from .chartab import CodegreeReport, character_table, codegrees_bruteforce
from .formulas import cod_formula
from .group import OrderGuardError, check_guard, order_guard
from .pc import PresentationError
from .verify import SUITES, verify

SCHEMA_VERSION = 1


class UsageError(Exception):
    pass


def _primes(text: str) -> list[int]:
    try:
        return [int(s) for s in text.split(",") if s.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad prime list {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="codegree", description="Character codegrees of finite p-groups")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    ls = sub.add_parser("list", help="catalog of constructible groups and published table rows")
    ls.add_argument("--format", choices=("json", "md", "csv"), default="md")

    def common(sp):
        sp.add_argument("group", nargs="?", help="catalog id, e.g. phi2_31, abelian:2,1, user_json:g.json")
        sp.add_argument("--group", dest="group_opt")
        sp.add_argument("--p", type=int, default=None)
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--order-guard", type=int, default=None)
        sp.add_argument("--allow-p3", action="store_true", help="build classification groups at p = 3")

    cp = sub.add_parser("compute", help="codegree set of one group")
    common(cp)
    cp.add_argument("--method", choices=("formula", "bruteforce", "both"), default="both")
    cp.add_argument("--format", choices=("json", "md", "csv"), default="json")

    vp = sub.add_parser("verify", help="compare published tables, formulas and brute force")
    vp.add_argument("suite", choices=SUITES + ("all",))
    vp.add_argument("--primes", type=_primes, default=None)
    vp.add_argument("--seed", type=int, default=0)
    vp.add_argument("--order-guard", type=int, default=None)
    vp.add_argument("--format", choices=("json", "md", "csv"), default="json")
    vp.add_argument("--timings", action="store_true", help="include runtime_ms (breaks byte-identical output)")

    tp = sub.add_parser("chartab", help="write the character table as JSON")
    common(tp)
    tp.add_argument("--out", required=True)
    return ap


def _group_id(args) -> GroupId:
    text = args.group_opt or args.group
    if not text:
        raise UsageError("a group id is required")
    if args.p is None and not text.startswith("user_json:"):
        raise UsageError("--p is required")
    try:
        return GroupId.parse(text, args.p or 0, allow_p3=args.allow_p3)
    except (CatalogError, ValueError) as exc:
        raise UsageError(str(exc)) from None


def _load(args):
    gid = _group_id(args)
    try:
        pres = build(gid)
        check_guard(pres, args.order_guard)
    except (CatalogError, PresentationError, OrderGuardError) as exc:
        raise UsageError(str(exc)) from None
    return gid, pres


def _power_label(c: int, p: int) -> str:
    e = 0
    while c > 1:
        c //= p
        e += 1
    return "1" if e == 0 else ("p" if e == 1 else f"p^{e}")


def _emit_reports(gid: GroupId, reports: list[CodegreeReport], fmt: str, match) -> str:
    if fmt == "json":
        payload = {"schema_version": SCHEMA_VERSION, "group": gid.label, "p": reports[0].p,
                   "reports": [r.to_dict() for r in reports]}
        if match is not None:
            payload["match"] = match
        return json.dumps(payload, sort_keys=True, indent=2) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["group", "p", "order", "method", "cod"])
        for r in reports:
            w.writerow([gid.label, r.p, r.order, r.method, " ".join(map(str, r.cod))])
        return buf.getvalue()
    lines = [f"## {gid.label} at p = {reports[0].p}", "", "| method | cod(G) |", "|---|---|"]
    for r in reports:
        lines.append(f"| {r.method} | {{{', '.join(_power_label(c, r.p) for c in r.cod)}}} |")
    if match is not None:
        lines += ["", f"match: {str(match).lower()}"]
    return "\n".join(lines) + "\n"


def cmd_list(args) -> int:
    if args.format == "json":
        sys.stdout.write(catalog.catalog_json() + "\n")
    elif args.format == "md":
        sys.stdout.write(catalog.catalog_markdown())
    else:
        w = csv.writer(sys.stdout, lineterminator="\n")
        w.writerow(["template", "description", "paper_row", "expected_cod", "constructible"])
        for e in catalog.list_catalog():
            w.writerow([e.template, e.description, e.paper_row, e.expected_cod, e.constructible])
    return 0


def cmd_compute(args) -> int:
    gid, pres = _load(args)
    reports = []
    if args.method in ("formula", "both"):
        f = cod_formula(pres)
        if f is None:
            if args.method == "formula":
                raise UsageError("no closed formula applies to this group; use --method bruteforce")
        else:
            reports.append(f)
    if args.method in ("bruteforce", "both"):
        reports.append(codegrees_bruteforce(pres, args.seed))
    match = None
    if args.method == "both":
        match = len(reports) == 2 and reports[0].cod == reports[1].cod
    sys.stdout.write(_emit_reports(gid, reports, args.format, match))
    return 0


def cmd_verify(args) -> int:
    result = verify(args.suite, args.primes, args.seed, args.order_guard)
    if args.format == "json":
        sys.stdout.write(json.dumps(result.to_dict(args.timings), sort_keys=True, indent=2) + "\n")
    elif args.format == "csv":
        w = csv.writer(sys.stdout, lineterminator="\n")
        w.writerow(["suite", "group", "paper_row", "p", "status", "expected", "formula", "bruteforce", "reason"])
        for r in result.records:
            w.writerow([r.suite, r.group, r.paper_row, r.p, r.status,
                        " ".join(map(str, r.expected or [])), " ".join(map(str, r.formula or [])),
                        " ".join(map(str, r.bruteforce or [])), r.reason])
    else:
        sys.stdout.write("| suite | group | row | p | status | expected | formula | bruteforce |\n")
        sys.stdout.write("|---|---|---|---|---|---|---|---|\n")
        for r in result.records:
            sys.stdout.write(f"| {r.suite} | {r.group} | {r.paper_row} | {r.p} | {r.status} | "
                             f"{r.expected or '-'} | {r.formula or '-'} | {r.bruteforce or '-'} |\n")
    if not result.passed:
        for r in result.records:
            if r.status == "fail":
                print(f"MISMATCH {r.suite} {r.group} p={r.p}: expected={r.expected} "
                      f"formula={r.formula} bruteforce={r.bruteforce}", file=sys.stderr)
        return 1
    return 0


def cmd_chartab(args) -> int:
    gid, pres = _load(args)
    table = character_table(pres, args.seed)
    try:
        Path(args.out).write_text(table.to_json() + "\n", encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot write {args.out}: {exc}") from None
    print(f"wrote {len(table.rows)} characters of {gid.label} (p={pres.p}) to {args.out}")
    return 0


COMMANDS = {"list": cmd_list, "compute": cmd_compute, "verify": cmd_verify, "chartab": cmd_chartab}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING)
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
