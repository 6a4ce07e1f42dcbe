"""Command-line interface.

Verbs: list, validate, report <case>, tables, solve <case>.

Exit codes (stable contract for CI):
  0  success
  1  reference-data or invariant mismatch
  2  catalog parse failure
  3  unknown case
  4  bad arguments
"""

from __future__ import annotations

import argparse
import random
import sys
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

from .crosscheck import crosscheck_case, sample_point
from .exact import ParseError, parse_ratfunc, rf
from .eym import HolonomyMetric, run_case
from .geom import lorentz_check, lorentz_condition_holds
from .liecat import (Catalog, CatalogParseError, UnknownCase, catalog_load,
                     isotropy_rep, rep_is_faithful, rep_is_homomorphism,
                     validate_pair)
from .report import (json_dumps, report_markdown, report_to_dict,
                     tables_data, tables_markdown)


class _ArgumentError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _ArgumentError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="eymsym", description=__doc__,
                     formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--catalog", help="override the bundled catalog file")
    sub = parser.add_subparsers(dest="command", required=True)

    p_list = sub.add_parser("list", help="list the catalog cases")
    p_list.add_argument("--filter", help="glob over case ids, e.g. '2.1^2(*)'")

    p_val = sub.add_parser("validate", help="run the validation suite")
    p_val.add_argument("--filter")
    p_val.add_argument("--jobs", type=int, default=1)

    p_rep = sub.add_parser("report", help="full report for one case")
    p_rep.add_argument("case")
    p_rep.add_argument("--format", choices=("markdown", "json"),
                       default="markdown")
    p_rep.add_argument("--g-holonomy", dest="g_holonomy",
                       help="diagonal holonomy metric overrides, e.g. 5=2,6=4")
    p_rep.add_argument("--out")

    p_tab = sub.add_parser("tables", help="emit the four summary tables")
    p_tab.add_argument("--format", choices=("markdown", "json"),
                       default="markdown")
    p_tab.add_argument("--g-holonomy", dest="g_holonomy")
    p_tab.add_argument("--out")

    p_sol = sub.add_parser("solve", help="first/second equation outcome")
    p_sol.add_argument("case")
    p_sol.add_argument("--g-holonomy", dest="g_holonomy")
    p_sol.add_argument("--sample", help="rational parameter values, e.g. a=3,b=5")
    p_sol.add_argument("--out")
    return parser


def _parse_holonomy(text: str | None) -> HolonomyMetric:
    hm = HolonomyMetric()
    if not text:
        return hm
    for piece in text.split(","):
        key, _, value = piece.partition("=")
        if not _ or not key.strip().isdigit():
            raise _ArgumentError(f"bad --g-holonomy entry {piece!r}")
        try:
            hm.overrides[int(key)] = parse_ratfunc(value.strip())
        except ParseError as exc:
            raise _ArgumentError(str(exc))
    return hm


def _parse_sample(text: str | None) -> dict:
    out = {}
    if not text:
        return out
    for piece in text.split(","):
        key, _, value = piece.partition("=")
        if not _:
            raise _ArgumentError(f"bad --sample entry {piece!r}")
        try:
            out[key.strip()] = Fraction(value.strip())
        except (ValueError, ZeroDivisionError):
            raise _ArgumentError(f"bad rational value in {piece!r}")
    return out


def _emit(text: str, out_path: str | None) -> None:
    if out_path:
        with open(out_path, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)


def _cmd_list(catalog: Catalog, args) -> int:
    entries = catalog.filter(args.filter)
    for e in entries:
        golden = e.golden
        space = f"  {golden.space}" if golden.space else ""
        print(f"{e.pair.case_id:18s} dim_h={e.pair.dim_h}  "
              f"L: {golden.lorentz or '-':12s}{space}")
    print(f"{len(entries)} case(s)")
    return 0


def _validate_one(entry) -> list:
    failures = []
    rep = validate_pair(entry.pair)
    failures += [f"{name} ({witness})" if witness else name
                 for name, witness in rep.failures()]
    mats = isotropy_rep(entry.pair)
    if not rep_is_homomorphism(entry.pair, mats):
        failures.append("isotropy homomorphism")
    if not rep_is_faithful(entry.pair, mats):
        failures.append("isotropy faithfulness")
    report = run_case(entry)
    failures += [f"golden:{name}" for name, ok in report.flags.items() if not ok]
    # invariant suite: tracelessness, trace identity, second equation
    ginv = report.family.g_inverse()
    trace = rf(0)
    for i in range(4):
        for j in range(4):
            trace = trace + ginv.entries[i][j] * report.T.entries[i][j]
    if not trace.is_zero():
        failures.append("stress tensor trace")
    if report.verdict.is_solution:
        if report.verdict.lambda_ * rf(4) != report.lc.scalar:
            failures.append("lambda != scalar/4")
        if not report.second_residual_zero:
            failures.append("second equation residual")
    rng = random.Random(hash(entry.pair.case_id) & 0xFFFF)
    avoid = [c for c in report.verdict.conditions]
    sample = sample_point(entry, rng, avoid=avoid)
    failures += crosscheck_case(entry, report, sample)
    # recorded Lorentz condition against exact signature verdicts
    if report.family.lorentz:
        for _ in range(5):
            s = sample_point(entry, rng)
            verdict = lorentz_check(report.family, s)
            expect = lorentz_condition_holds(report.family.lorentz, s)
            if (verdict.value == "lorentzian") != expect:
                failures.append(f"lorentz condition at {s}")
                break
    return failures


def _cmd_validate(catalog: Catalog, args) -> int:
    entries = catalog.filter(args.filter)
    results = {}
    if args.jobs > 1:
        with ThreadPoolExecutor(max_workers=args.jobs) as pool:
            futures = {e.pair.case_id: pool.submit(_validate_one, e)
                       for e in entries}
        results = {cid: f.result() for cid, f in futures.items()}
    else:
        results = {e.pair.case_id: _validate_one(e) for e in entries}
    n_ok = 0
    for e in entries:
        failures = results[e.pair.case_id]
        if failures:
            print(f"FAIL {e.pair.case_id}: " + "; ".join(failures))
        else:
            n_ok += 1
            print(f"ok   {e.pair.case_id}")
    print(f"{n_ok}/{len(entries)} pass")
    return 0 if n_ok == len(entries) else 1


def _cmd_report(catalog: Catalog, args) -> int:
    entry = catalog.get(args.case)
    report = run_case(entry, _parse_holonomy(args.g_holonomy))
    if args.format == "json":
        _emit(json_dumps(report_to_dict(report)), args.out)
    else:
        _emit(report_markdown(report), args.out)
    return 0 if report.golden_ok else 1


def _cmd_tables(catalog: Catalog, args) -> int:
    data = tables_data(catalog, _parse_holonomy(args.g_holonomy))
    if args.format == "json":
        _emit(json_dumps(data), args.out)
    else:
        _emit(tables_markdown(data), args.out)
    return 1 if data["mismatches"] else 0


def _cmd_solve(catalog: Catalog, args) -> int:
    entry = catalog.get(args.case)
    report = run_case(entry, _parse_holonomy(args.g_holonomy))
    lines = [f"case {report.case_id}"]
    v = report.verdict
    if v.is_solution:
        lines.append(f"first equation: lambda = {v.lambda_}, kappa = {v.kappa}")
        if v.conditions:
            lines.append("conditions: " + ", ".join(str(c) for c in v.conditions))
    else:
        lines.append(f"first equation: {v.verdict_string()}"
                     + (f" ({v.detail})" if v.detail else ""))
    lines.append("second equation residual: "
                 + ("0" if report.second_residual_zero else "nonzero"))
    sample = _parse_sample(args.sample)
    if sample:
        missing = sorted(set(report.family.free_params)
                         | {p.name for p in entry.pair.params})
        missing = [name for name in missing if name not in sample]
        if missing:
            raise _ArgumentError(f"--sample misses parameters {missing}")
        sig = lorentz_check(report.family, sample)
        lines.append(f"signature at sample: {sig.value}")
        if v.is_solution:
            lines.append(f"lambda at sample = {v.lambda_.evaluate(sample)}")
            lines.append(f"kappa at sample = {v.kappa.evaluate(sample)}")
    _emit("\n".join(lines) + "\n", args.out)
    return 0


def main(argv: list | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except _ArgumentError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    try:
        catalog = catalog_load(args.catalog)
    except (CatalogParseError, OSError) as exc:
        print(f"catalog error: {exc}", file=sys.stderr)
        return 2
    try:
        if args.command == "list":
            return _cmd_list(catalog, args)
        if args.command == "validate":
            return _cmd_validate(catalog, args)
        if args.command == "report":
            return _cmd_report(catalog, args)
        if args.command == "tables":
            return _cmd_tables(catalog, args)
        if args.command == "solve":
            return _cmd_solve(catalog, args)
    except UnknownCase as exc:
        print(f"unknown case: {exc}", file=sys.stderr)
        return 3
    except _ArgumentError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    return 4


if __name__ == "__main__":
    sys.exit(main())
