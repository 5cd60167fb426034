"""Command-line front end.

Exit codes: 0 all checks passed, 1 a mathematical check failed, 2 usage or
parse error, 3 budget or cap exceeded.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from typing import Optional, Sequence

from . import census, frame, stone
from .codensity import (
    DEFAULT_BOUNDS,
    DEFAULT_MAX_ARROWS,
    DEFAULT_MAX_OBJECTS,
    KINDS,
    BudgetExceeded,
    GeneratorSpec,
    projection_laws,
    stabilization_scan,
)
from .documents import ParseError, dump_document, parse_document
from .monad import verify_laws
from .topology import classify

log = logging.getLogger("finitop")

OK, CHECK_FAILED, USAGE, BUDGET = 0, 1, 2, 3


def _read(path: str) -> tuple[str, object]:
    text = sys.stdin.read() if path == "-" else open(path, encoding="utf-8").read()
    return parse_document(text)


def _emit(report: dict, fmt: str) -> None:
    if fmt == "machine":
        sys.stdout.write(json.dumps(report, sort_keys=False) + "\n")
        return
    for key, value in report.items():
        if isinstance(value, (dict, list)):
            value = json.dumps(value)
        sys.stdout.write(f"{key}: {value}\n")


def cmd_classify(args) -> int:
    name, x = _read(args.input)
    c = classify(x)
    _emit(
        {
            "name": name,
            "space": x.canonical_string(),
            "is_t0": c.is_t0,
            "is_discrete": c.is_discrete,
            "is_sober": c.is_sober,
            "is_stone": c.is_stone,
            "sc_size": stone.sc_carrier(x).n,
            "fpo_size": frame.fpo_carrier(x).n,
        },
        args.format,
    )
    return OK


def _reflect(args, carrier, unit, suffix: str) -> int:
    name, x = _read(args.input)
    t, u = carrier(x), unit(x)
    out_name = f"{name}-{suffix}" if name else suffix
    if args.format == "machine":
        sys.stdout.write(dump_document(t, out_name, u))
    else:
        sys.stdout.write(dump_document(t, out_name))
        for p, q in u.table():
            sys.stdout.write(f"unit {p} -> {q}\n")
    return OK


def cmd_soberify(args) -> int:
    return _reflect(args, frame.fpo_carrier, frame.unit_eta_sober, "sober")


def cmd_stoneify(args) -> int:
    return _reflect(args, stone.sc_carrier, stone.eta, "stone")


def cmd_monad_laws(args) -> int:
    name, x = _read(args.input)
    test_spaces = [x] + [s for k in range(3) for s in census.enumerate_topologies(k)]
    chosen = [stone.STONE, frame.SOBER] if args.monad == "both" else (
        [stone.STONE] if args.monad == "stone" else [frame.SOBER]
    )
    reports = []
    for monad in chosen:
        kind = "finset" if monad is stone.STONE else "sierpinski"
        report = verify_laws(monad, x, test_spaces)
        projection_laws(x, GeneratorSpec(kind, args.bound or DEFAULT_BOUNDS[kind]), report)
        reports.append(report)
    passed = all(r.passed for r in reports)
    if args.format == "machine":
        _emit({"name": name, "passed": passed, "reports": [r.to_dict() for r in reports]}, "machine")
    else:
        for r in reports:
            for law in r.checked:
                fails = r.failures[law]
                verdict = "PASS" if not fails else "FAIL"
                sys.stdout.write(f"{r.monad} {law}: {verdict} ({r.checked[law]} checks)\n")
                for w in fails[:5]:
                    sys.stdout.write(f"    {w}\n")
    return OK if passed else CHECK_FAILED


def cmd_limit_check(args) -> int:
    name, x = _read(args.input)
    kind = args.generator
    bounds = args.bound or [DEFAULT_BOUNDS[kind], DEFAULT_BOUNDS[kind] + 1]
    report = stabilization_scan(
        x, kind, bounds, max_objects=args.max_objects, max_arrows=args.max_arrows
    )
    for e in report.entries:
        log.info("bound %d took %.3fs", e.bound, e.seconds)
    out = {"name": name, **report.to_dict()}
    if args.format == "machine":
        _emit(out, "machine")
    else:
        sys.stdout.write(f"space: {out['space']}\ngenerator: {kind}\n")
        for e in report.entries:
            sys.stdout.write(
                f"bound {e.bound}: {e.objects} objects, {e.arrows} arrows, "
                f"limit {e.carrier_size} points, candidate {e.candidate_size} points, "
                f"{'iso' if e.iso else 'not iso'}\n"
            )
        sys.stdout.write(f"least iso bound: {report.least_iso_bound}\nstable: {report.stable}\n")
    return OK if report.stable else CHECK_FAILED


def cmd_census(args) -> int:
    start = time.perf_counter()
    rows = census.run_census(args.n, cap=args.cap, jobs=args.jobs, limits=args.limits)
    sys.stdout.write(census.rows_to_csv(rows, limits=args.limits))
    failed = sum(not r.passed for r in rows)
    sys.stderr.write(f"total {len(rows)} topologies on {args.n} points, {failed} failing\n")
    log.info("census took %.3fs", time.perf_counter() - start)
    return OK if not failed else CHECK_FAILED


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="finitop",
        description="Stone and sober codensity checks on finite topological spaces.",
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="log timings to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    def with_input(p):
        p.add_argument("input", help="space document (JSON), or - for stdin")
        p.add_argument("--format", choices=["text", "machine"], default="text")
        return p

    with_input(sub.add_parser("classify", help="separation and duality classification")).set_defaults(
        func=cmd_classify
    )
    with_input(sub.add_parser("soberify", help="soberification with its unit")).set_defaults(
        func=cmd_soberify
    )
    with_input(sub.add_parser("stoneify", help="Stone reflection with its unit")).set_defaults(
        func=cmd_stoneify
    )

    p = with_input(sub.add_parser("monad-laws", help="monad and projection laws"))
    p.add_argument("--monad", choices=["stone", "sober", "both"], default="both")
    p.add_argument("--bound", type=int, help="generator bound for the projection laws")
    p.set_defaults(func=cmd_monad_laws)

    p = with_input(sub.add_parser("limit-check", help="compare the monad with truncated limits"))
    p.add_argument("--generator", choices=KINDS, default="finset")
    p.add_argument("--bound", type=int, action="append", help="truncation bound (repeatable)")
    p.add_argument("--max-objects", type=int, default=DEFAULT_MAX_OBJECTS)
    p.add_argument("--max-arrows", type=int, default=DEFAULT_MAX_ARROWS)
    p.set_defaults(func=cmd_limit_check)

    p = sub.add_parser("census", help="CSV over every labelled topology on n points")
    p.add_argument("n", type=int)
    p.add_argument("--cap", type=int, default=census.DEFAULT_CENSUS_CAP)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--limits", action="store_true", help="add truncated-limit verdicts")
    p.set_defaults(func=cmd_census)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    # the package logger gets its own stderr handler so timings never reach stdout
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter("%(levelname)s %(name)s: %(message)s"))
    log.handlers[:] = [handler]
    log.setLevel(logging.INFO if args.verbose else logging.WARNING)
    try:
        return args.func(args)
    except (ParseError, OSError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return USAGE
    except (BudgetExceeded, census.CapExceeded, frame.IndexCapExceeded) as exc:
        sys.stderr.write(f"budget exceeded: {exc}\n")
        return BUDGET


if __name__ == "__main__":
    sys.exit(main())
