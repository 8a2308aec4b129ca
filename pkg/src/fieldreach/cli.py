"""Command-line driver.

Exit codes: 0 on success, 1 on analysis errors (parse/type/analysis
failures, or soundness violations under --oracle-check), 2 on usage errors
(bad flags, unreadable input, malformed queries).
"""

from __future__ import annotations

import argparse
import re
import sys
from typing import Optional

from .classtable import ClassTableError, build_class_table
from .domain import RcValue
from .formula import FieldUniverse, PathFormula
from .oracle import BudgetExceeded, NullDereference, check_soundness, run_concrete
from .parser import ParseError, parse_program
from .render import render_compare, render_final, render_table, result_to_json
from .semantics import AnalysisError, analyze_program, find_entry_sig
from .sharing import SharingState
from .syntax import Program, RESULT_VAR
from .typecheck import TypeCheckError, type_check

USAGE_ERROR = 2
ANALYSIS_ERROR = 1

_QUERY_RE = re.compile(
    r"^\s*(?:(cyc)\s+(\w+)\s*\{\s*([\w,\s]*)\}|(reach)\s+(\w+)\s+(\w+))\s*$"
)


class UsageError(Exception):
    pass


def parse_query(text: str):
    m = _QUERY_RE.match(text)
    if not m:
        raise UsageError(
            f'malformed query {text!r}; use "cyc v {{f1,f2}}" or "reach v w"'
        )
    if m.group(1) == "cyc":
        fields = tuple(f.strip() for f in m.group(3).split(",") if f.strip())
        return ("cyc", m.group(2), fields)
    return ("reach", m.group(5), m.group(6))


def parse_init_annotations(
    program: Program,
    universe: FieldUniverse,
    variables: tuple[str, ...],
    ref_vars: frozenset[str],
) -> tuple[RcValue, SharingState]:
    """Resolve the ``//@ init`` lines into the entry abstract value and the
    entry sharing state; unannotated entries stay at the contradiction."""
    value = RcValue.bottom(universe, variables, ref_vars)
    sp = SharingState.empty()
    concrete = set(universe.concrete_fields)
    mentioned: set[str] = set()
    for ann in program.annotations:
        for v in ann.variables:
            if v not in ref_vars:
                raise AnalysisError(
                    f"line {ann.line}: annotation names unknown reference variable {v!r}"
                )
        mentioned.update(ann.variables)
        if ann.kind == "ds":
            a, b = ann.variables
            sp = sp.add_ds([(a, b)]).add_sh([(a, b), (a, a), (b, b)])
            continue
        masks = set()
        for model in ann.models or []:
            for f in model:
                if f not in concrete:
                    raise AnalysisError(
                        f"line {ann.line}: annotation names unknown field {f!r}"
                    )
            masks.add(universe.mask_of(model))
        formula = PathFormula.from_models(universe, masks)
        if ann.kind == "reach":
            a, b = ann.variables
            value.reach[(a, b)] = value.reach[(a, b)].join(formula)
        else:
            (a,) = ann.variables
            value.cyc[a] = value.cyc[a].join(formula)
    # a variable asserted reachable/cyclic may be non-null: give it a region
    sp = sp.add_sh(
        [(v, v) for v in mentioned]
        + [
            (a, b)
            for (a, b), f in value.reach.items()
            if not f.is_false and a != b
        ]
    )
    return value.normalize(), sp


def build_arg_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="fieldreach",
        description="Field-sensitive reachability and cyclicity analyzer",
    )
    ap.add_argument("input", help="source file (.lang)")
    ap.add_argument("--entry", default="main", help="entry: 'main' or a method name")
    ap.add_argument(
        "--track-fields",
        default="all",
        help="comma-separated fields to track explicitly, or 'all'",
    )
    ap.add_argument("--widening", type=int, default=16, metavar="K",
                    help="changes per entry before widening to true (default 16)")
    ap.add_argument("--format", choices=["text", "json"], default="text")
    ap.add_argument("--dump-lines", action="store_true",
                    help="print the per-line table of abstract values")
    ap.add_argument("--dump-sharing", action="store_true",
                    help="print per-line deep-sharing pairs (main entry)")
    ap.add_argument("--compare-domains", action="store_true",
                    help="print coarser-domain views of the final value")
    ap.add_argument("--oracle-check", action="store_true",
                    help="run the concrete interpreter and check soundness (main entry only)")
    ap.add_argument("--heap-budget", type=int, default=100_000,
                    help="concrete interpreter step budget")
    ap.add_argument("--query", action="append", default=[], metavar="Q",
                    help='"cyc v {f1,f2}" or "reach v w"; repeatable')
    return ap


def run(argv: Optional[list[str]] = None) -> int:
    ap = build_arg_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return USAGE_ERROR if exc.code not in (0, None) else 0
    try:
        with open(args.input, "r", encoding="utf-8") as fh:
            source = fh.read()
    except OSError as exc:
        print(f"error: cannot read {args.input}: {exc}", file=sys.stderr)
        return USAGE_ERROR
    if args.widening < 1:
        print("error: --widening must be at least 1", file=sys.stderr)
        return USAGE_ERROR
    try:
        queries = [parse_query(q) for q in args.query]
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR

    try:
        program = parse_program(source)
        ct = build_class_table(program)
        typeinfo = type_check(program, ct)
        tracked = None
        if args.track_fields != "all":
            tracked = [f.strip() for f in args.track_fields.split(",") if f.strip()]
            unknown = set(tracked) - set(ct.reference_fields)
            if unknown:
                raise AnalysisError(f"unknown tracked fields: {sorted(unknown)}")
        universe = (
            FieldUniverse.of(ct.reference_fields)
            if tracked is None
            else FieldUniverse.tracked(ct.reference_fields, tracked)
        )
        if args.entry == "main":
            if program.main is None:
                raise AnalysisError("program has no main block")
            env = typeinfo.env_for("main")
            variables = tuple(env.variables) + (RESULT_VAR,)
            refs = frozenset(env.ref_vars) | {RESULT_VAR}
            entry: object = "main"
        else:
            sig = find_entry_sig(ct, args.entry)
            env = typeinfo.env_for(sig.key)
            variables = sig.input_vars
            refs = frozenset(v for v in sig.input_vars if env.type_of(v) != "int")
            entry = sig
        init_rc, init_sp = parse_init_annotations(program, universe, variables, refs)
        result = analyze_program(
            program,
            ct,
            typeinfo,
            tracked=tracked,
            entry=entry,
            init_rc=init_rc,
            init_sp=init_sp,
            widening_k=args.widening,
        )
    except (ParseError, ClassTableError, TypeCheckError, AnalysisError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return ANALYSIS_ERROR

    exit_code = 0
    query_results: list[tuple[str, object]] = []
    try:
        for q, raw in zip(queries, args.query):
            if q[0] == "cyc":
                query_results.append((raw, result.query_cycle(q[1], q[2])))
            else:
                query_results.append((raw, result.query_reach(q[1], q[2])))
    except AnalysisError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return ANALYSIS_ERROR

    oracle_report = None
    if args.oracle_check:
        if args.entry != "main":
            print("error: --oracle-check needs the main entry", file=sys.stderr)
            return USAGE_ERROR
        try:
            oracle = run_concrete(program, ct, budget=args.heap_budget)
        except (NullDereference, BudgetExceeded) as exc:
            print(f"error: concrete execution failed: {exc}", file=sys.stderr)
            return ANALYSIS_ERROR
        oracle_report = check_soundness(result, oracle)
        if not oracle_report.ok:
            exit_code = ANALYSIS_ERROR

    if args.format == "json":
        sys.stdout.write(result_to_json(result, query_results))
    else:
        if args.dump_lines:
            sys.stdout.write(render_table(result))
        if args.dump_sharing:
            if args.entry != "main":
                print("error: --dump-sharing needs the main entry", file=sys.stderr)
                return USAGE_ERROR
            from .render import render_sharing
            from .sharing import SharingAnalysis

            sharing = SharingAnalysis(program, ct, typeinfo)
            sharing.analyze_main(init_sp)
            sys.stdout.write(render_sharing(program, sharing))
        sys.stdout.write(render_final(result))
        if args.compare_domains:
            sys.stdout.write(render_compare(result, ct, typeinfo))
        for raw, res in query_results:
            if isinstance(res, bool):
                print(f"{raw} -> {'true' if res else 'false'}")
            else:
                print(f"{raw} -> {res}")
        if oracle_report is not None:
            if oracle_report.ok:
                print(
                    f"oracle check: ok ({oracle_report.points_checked} points, "
                    f"{oracle_report.states_checked} states)"
                )
            else:
                print(
                    f"oracle check: {len(oracle_report.violations)} violation(s), "
                    f"{len(oracle_report.missing_points)} unchecked point(s)"
                )
                for v in oracle_report.violations:
                    print(f"  {v}")
    return exit_code


def main() -> None:
    sys.exit(run())
