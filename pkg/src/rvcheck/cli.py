"""Command line front end.

Subcommands:

  check      verify one algorithm under one scheduler
  table      fill the verdict matrix, optionally against the golden copy
  icc        static identical-color-condition scan
  validate   parse and semantic-check an algorithm
  replay     re-certify a saved counterexample trace

Exit codes: 0 for PASS or a clean result, 1 for FAIL or a violated
condition, 2 for usage and input errors, 3 when a resource limit cut a
run short.  Every subcommand takes ``--json`` to print the structured
report on stdout and ``--report PATH`` to write the same document to a
file.  ``RVCHECK_MAX_STATES`` and ``RVCHECK_MAX_SECONDS`` override the
resource defaults; explicit flags beat the environment.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys
from typing import Dict, List, Optional, Sequence, Tuple

from .algorithms import (
    AlgorithmSpec,
    BUILTIN_NAMES,
    Color,
    InitRegime,
    builtin,
    check_icc,
    load_algorithm_file,
    validate_spec,
)
from .checker import (
    DEFAULT_MAX_SECONDS,
    DEFAULT_MAX_STATES,
    ExploreOptions,
    FAIL,
    LassoTrace,
    PASS,
    ResourceLimitError,
    RunStats,
    Verdict,
    certify,
    explore,
    nonrigid_explore,
)
from .model import LightModel
from .scheduling import SCHEDULER_NAMES, default_fairness_bound
from .traces import TraceFormatError, TraceMeta, load_trace, save_trace

# Table column order is fixed; golden verdicts per row use one letter per
# column, P for PASS and F for FAIL.
TABLE_COLUMNS: Tuple[str, ...] = (
    "centralized",
    "fsync",
    "ssync",
    "async-lc",
    "async-move",
    "async",
)

GOLDEN_VERDICTS: Dict[str, str] = {
    "NoMove": "FFFFFF",
    "ToHalf": "FPFFFF",
    "ToOther": "PFFFFF",
    "Vig2Cols": "PPPPFF",
    "Vig3Cols": "PPPPPP",
    "Her2Cols": "PPPPPP",
    "Flo3ColsX": "PPPFFF",
    "Oku5ColsX": "PPPPFF",
    "Oku4ColsX": "PFFFFF",
    "Oku3ColsX": "PFFFFF",
    "Oku4ColsQSS": "PPPPFF",
    "Oku3ColsNSS": "PPPPFF",
}

MARKS = {PASS: "✓", FAIL: "-", None: "!"}

EXIT_CLEAN = 0
EXIT_VIOLATED = 1
EXIT_USAGE = 2
EXIT_LIMIT = 3


class CliError(Exception):
    """Input or usage problem; maps to exit code 2."""


def _resolve_algorithm(token: str) -> AlgorithmSpec:
    for name in BUILTIN_NAMES:
        if name.lower() == token.lower():
            return builtin(name)
    if os.path.exists(token):
        result = load_algorithm_file(token)
        if not result.ok:
            listing = "\n".join(str(d) for d in result.errors())
            raise CliError(f"{token}: does not parse\n{listing}")
        return result.spec
    raise CliError(
        f"unknown algorithm {token!r}; not a built-in name "
        f"({', '.join(BUILTIN_NAMES)}) and no such file"
    )


def _parse_init(token: str) -> InitRegime:
    lowered = token.lower()
    if lowered == "all-pairs":
        return InitRegime.all_pairs()
    if lowered == "identical-pairs":
        return InitRegime.identical_pairs()
    if lowered.startswith("fixed:"):
        color_name = token.split(":", 1)[1].upper()
        try:
            return InitRegime.fixed(Color[color_name])
        except KeyError:
            raise CliError(f"unknown color {color_name!r} in --init") from None
    raise CliError(
        f"bad --init {token!r}; takes all-pairs, identical-pairs, or fixed:COLOR"
    )


def _apply_overrides(spec: AlgorithmSpec, args: argparse.Namespace) -> AlgorithmSpec:
    if getattr(args, "lights", None):
        model = LightModel.FULL if args.lights == "full" else LightModel.EXTERNAL
        spec = dataclasses.replace(spec, light_model=model)
    if getattr(args, "init", None):
        spec = spec.with_init_regime(_parse_init(args.init))
    problems = [d for d in validate_spec(spec) if d.severity == "error"]
    if problems:
        listing = "\n".join(str(d) for d in problems)
        raise CliError(f"{spec.name}: not safe to explore\n{listing}")
    return spec


def _env_number(name: str, parse) -> Optional[float]:
    raw = os.environ.get(name)
    if raw is None or raw == "":
        return None
    try:
        return parse(raw)
    except ValueError:
        raise CliError(f"{name}={raw!r} is not a number") from None


def _explore_options(args: argparse.Namespace) -> ExploreOptions:
    max_states = args.max_states
    if max_states is None:
        max_states = _env_number("RVCHECK_MAX_STATES", int)
    max_seconds = args.max_seconds
    if max_seconds is None:
        max_seconds = _env_number("RVCHECK_MAX_SECONDS", float)
    return ExploreOptions(
        fairness_bound=getattr(args, "fairness", None),
        include_same_start=getattr(args, "same_start", False),
        lc_includes_begmove=getattr(args, "lc_includes_begmove", False),
        max_states=int(max_states) if max_states is not None else DEFAULT_MAX_STATES,
        max_seconds=float(max_seconds) if max_seconds is not None else DEFAULT_MAX_SECONDS,
    )


def _stats_doc(stats: RunStats) -> dict:
    return {
        "stored_states": stats.stored_states,
        "transitions": stats.transitions,
        "peak_frontier": stats.peak_frontier,
        "wall_time": round(stats.wall_time, 6),
    }


def _emit(doc: dict, args: argparse.Namespace) -> None:
    text = json.dumps(doc, indent=2)
    if getattr(args, "json", False):
        print(text)
    if getattr(args, "report", None):
        with open(args.report, "w", encoding="utf-8") as handle:
            handle.write(text + "\n")


def _say(args: argparse.Namespace, message: str) -> None:
    # human lines are suppressed when the structured doc goes to stdout
    if not getattr(args, "json", False):
        print(message)


def _trace_summary(trace: LassoTrace) -> str:
    seed = trace.seed
    return (
        f"lasso: prefix {len(trace.prefix)} steps, cycle {len(trace.cycle)} "
        f"steps, seed dist={seed.distance.name}"
    )


# subcommands

def cmd_check(args: argparse.Namespace) -> int:
    spec = _apply_overrides(_resolve_algorithm(args.algo), args)
    kind = SCHEDULER_NAMES[args.sched]
    options = _explore_options(args)
    bound = options.fairness_bound or default_fairness_bound(spec.n_colors)
    try:
        if args.nonrigid:
            verdict = nonrigid_explore(spec, kind, options)
        else:
            _, verdict = explore(spec, kind, options)
    except ResourceLimitError as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return EXIT_LIMIT

    doc = {
        "format": "rvcheck-report",
        "version": 1,
        "command": "check",
        "algorithm": spec.name,
        "scheduler": args.sched,
        "fairness_bound": bound,
        "nonrigid": bool(args.nonrigid),
        "verdict": verdict.outcome,
        "stats": _stats_doc(verdict.stats),
        "lasso": None,
    }
    _say(args, f"{spec.name} under {args.sched}: {verdict.outcome}")
    stats = verdict.stats
    _say(
        args,
        f"  {stats.stored_states} states, {stats.transitions} transitions, "
        f"peak frontier {stats.peak_frontier}, {stats.wall_time:.2f} s",
    )
    if verdict.outcome == FAIL:
        trace = verdict.trace
        doc["lasso"] = {
            "prefix_length": len(trace.prefix),
            "cycle_length": len(trace.cycle),
        }
        _say(args, "  " + _trace_summary(trace))
        if args.trace:
            meta = TraceMeta(
                algorithm=spec.name,
                scheduler=args.sched,
                fairness_bound=bound,
                lc_includes_begmove=options.lc_includes_begmove,
                nonrigid=bool(args.nonrigid),
            )
            save_trace(args.trace, trace, meta)
            doc["trace_file"] = args.trace
            _say(args, f"  trace written to {args.trace}")
    _emit(doc, args)
    return EXIT_CLEAN if verdict.outcome == PASS else EXIT_VIOLATED


def _pick_rows(tokens: Optional[str]) -> List[str]:
    if not tokens:
        return list(BUILTIN_NAMES)
    rows = []
    for item in tokens.replace(",", " ").split():
        matched = next(
            (n for n in BUILTIN_NAMES if n.lower() == item.lower()), None
        )
        if matched is None:
            raise CliError(f"unknown table row {item!r}")
        rows.append(matched)
    return rows


def _pick_cols(tokens: Optional[str]) -> List[str]:
    if not tokens:
        return list(TABLE_COLUMNS)
    cols = []
    for item in tokens.replace(",", " ").split():
        if item.lower() not in TABLE_COLUMNS:
            raise CliError(f"unknown table column {item!r}")
        cols.append(item.lower())
    return cols


def cmd_table(args: argparse.Namespace) -> int:
    rows = _pick_rows(args.rows)
    cols = _pick_cols(args.cols)
    options = _explore_options(args)

    verdicts: Dict[Tuple[str, str], Optional[str]] = {}
    row_docs = []
    limited = False
    for row in rows:
        spec = _apply_overrides(_resolve_algorithm(row), args)
        cells = []
        for col in cols:
            try:
                _, verdict = explore(spec, SCHEDULER_NAMES[col], options)
                verdicts[row, col] = verdict.outcome
                cells.append(
                    {
                        "scheduler": col,
                        "verdict": verdict.outcome,
                        "stats": _stats_doc(verdict.stats),
                    }
                )
            except ResourceLimitError as exc:
                limited = True
                verdicts[row, col] = None
                cells.append(
                    {"scheduler": col, "verdict": None, "limit": str(exc)}
                )
        row_docs.append({"algorithm": row, "cells": cells})

    name_width = max(len(r) for r in rows) + 2
    header = " " * name_width + "  ".join(cols)
    lines = [header]
    for row in rows:
        marks = []
        for col in cols:
            marks.append(MARKS[verdicts[row, col]].ljust(len(col)))
        lines.append(row.ljust(name_width) + "  ".join(marks))
    for line in lines:
        _say(args, line)

    mismatches = []
    if args.golden:
        for row in rows:
            for col in cols:
                want = GOLDEN_VERDICTS[row][TABLE_COLUMNS.index(col)]
                want = PASS if want == "P" else FAIL
                got = verdicts[row, col]
                if got != want:
                    mismatches.append(
                        f"{row}/{col}: got {got or 'limit'}, golden says {want}"
                    )
        for line in mismatches:
            _say(args, line)
        if not mismatches:
            _say(args, f"matrix matches the golden table ({len(rows)}x{len(cols)})")

    doc = {
        "format": "rvcheck-report",
        "version": 1,
        "command": "table",
        "columns": cols,
        "rows": row_docs,
        "golden_match": (not mismatches) if args.golden else None,
    }
    _emit(doc, args)
    if limited:
        return EXIT_LIMIT
    if args.golden and mismatches:
        return EXIT_VIOLATED
    return EXIT_CLEAN


def cmd_icc(args: argparse.Namespace) -> int:
    spec = _apply_overrides(_resolve_algorithm(args.algo), args)
    result = check_icc(spec)
    doc = {
        "format": "rvcheck-report",
        "version": 1,
        "command": "icc",
        "algorithm": spec.name,
        "satisfied": result.satisfied,
        "witnesses": [[a.name, b.name] for a, b in result.witnesses],
    }
    if result.satisfied:
        _say(args, f"{spec.name}: identical color condition satisfied")
    else:
        _say(args, f"{spec.name}: identical color condition violated")
        for me, other in result.witnesses:
            _say(args, f"  changes color on ({me.name}, {other.name})")
    _emit(doc, args)
    return EXIT_CLEAN if result.satisfied else EXIT_VIOLATED


def cmd_validate(args: argparse.Namespace) -> int:
    token = args.algo
    diagnostics = []
    spec = None
    for name in BUILTIN_NAMES:
        if name.lower() == token.lower():
            spec = builtin(name)
            break
    if spec is None:
        if not os.path.exists(token):
            raise CliError(f"no algorithm named or stored at {token!r}")
        result = load_algorithm_file(token)
        diagnostics.extend(result.diagnostics)
        spec = result.spec
    if spec is not None:
        diagnostics.extend(validate_spec(spec))

    clean = not any(d.severity == "error" for d in diagnostics)
    doc = {
        "format": "rvcheck-report",
        "version": 1,
        "command": "validate",
        "algorithm": spec.name if spec is not None else token,
        "clean": clean,
        "diagnostics": [
            {
                "line": d.line,
                "col": d.col,
                "severity": d.severity,
                "message": d.message,
            }
            for d in diagnostics
        ],
    }
    for d in diagnostics:
        _say(args, str(d))
    _say(args, f"{token}: {'clean' if clean else 'not clean'}")
    _emit(doc, args)
    return EXIT_CLEAN if clean else EXIT_VIOLATED


def cmd_replay(args: argparse.Namespace) -> int:
    try:
        trace, meta = load_trace(args.trace)
    except OSError as exc:
        raise CliError(f"cannot read {args.trace}: {exc}") from exc
    except TraceFormatError as exc:
        raise CliError(f"{args.trace}: {exc}") from exc

    spec = _apply_overrides(
        _resolve_algorithm(args.algo or meta.algorithm), args
    )
    sched_name = args.sched or meta.scheduler
    if sched_name not in SCHEDULER_NAMES:
        raise CliError(f"unknown scheduler {sched_name!r} in trace header")
    kind = SCHEDULER_NAMES[sched_name]
    bound = args.fairness or meta.fairness_bound
    lcb = args.lc_includes_begmove or meta.lc_includes_begmove

    outcome = certify(trace, spec, kind, bound, lc_includes_begmove=lcb)
    doc = {
        "format": "rvcheck-report",
        "version": 1,
        "command": "replay",
        "trace": args.trace,
        "algorithm": spec.name,
        "scheduler": sched_name,
        "nonrigid": trace.nonrigid,
        "ok": outcome.ok,
        "step_index": outcome.step_index,
        "reason": outcome.reason,
    }
    if outcome.ok:
        _say(
            args,
            f"{args.trace}: certified against {spec.name} under {sched_name} "
            f"({len(trace.prefix)}+{len(trace.cycle)} steps)",
        )
    else:
        where = (
            "trace" if outcome.step_index is None else f"step {outcome.step_index}"
        )
        _say(args, f"{args.trace}: diverges at {where}: {outcome.reason}")
    _emit(doc, args)
    return EXIT_CLEAN if outcome.ok else EXIT_VIOLATED


# wiring

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rvcheck",
        description="Verify rendezvous of two luminous robots on the line.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    output = argparse.ArgumentParser(add_help=False)
    output.add_argument(
        "--json", action="store_true", help="print the structured report on stdout"
    )
    output.add_argument(
        "--report", metavar="PATH", help="write the structured report to a file"
    )

    spec_opts = argparse.ArgumentParser(add_help=False)
    spec_opts.add_argument(
        "--lights", choices=("full", "external"), help="override the light model"
    )
    spec_opts.add_argument(
        "--init",
        metavar="REGIME",
        help="override initial colors: all-pairs, identical-pairs, fixed:COLOR",
    )

    run_opts = argparse.ArgumentParser(add_help=False)
    run_opts.add_argument(
        "--fairness", type=int, metavar="N",
        help="consecutive-activation bound (default 8 per color)",
    )
    run_opts.add_argument(
        "--same-start", action="store_true",
        help="also start from already-gathered configurations",
    )
    run_opts.add_argument(
        "--lc-includes-begmove", action="store_true",
        help="let the async-lc block carry the movement start as well",
    )
    run_opts.add_argument(
        "--max-states", type=int, metavar="N",
        help=f"stored-state budget (default {DEFAULT_MAX_STATES})",
    )
    run_opts.add_argument(
        "--max-seconds", type=float, metavar="S",
        help=f"wall-clock budget per run (default {DEFAULT_MAX_SECONDS:.0f})",
    )

    check = sub.add_parser(
        "check", parents=[spec_opts, run_opts, output],
        help="verify one algorithm under one scheduler",
    )
    check.add_argument("--algo", required=True, help="built-in name or file path")
    check.add_argument(
        "--sched", required=True, choices=sorted(SCHEDULER_NAMES),
    )
    check.add_argument(
        "--nonrigid", action="store_true",
        help="model motion the scheduler may cut short",
    )
    check.add_argument(
        "--trace", metavar="PATH",
        help="write the counterexample here on FAIL (.json for JSON)",
    )
    check.set_defaults(run=cmd_check)

    table = sub.add_parser(
        "table", parents=[spec_opts, run_opts, output],
        help="fill the verdict matrix",
    )
    table.add_argument(
        "--rows", metavar="NAMES", help="comma-separated algorithm rows (default all)"
    )
    table.add_argument(
        "--cols", metavar="NAMES", help="comma-separated scheduler columns (default all)"
    )
    table.add_argument(
        "--golden", action="store_true",
        help="compare against the stored verdict matrix",
    )
    table.set_defaults(run=cmd_table)

    icc = sub.add_parser(
        "icc", parents=[spec_opts, output],
        help="check the identical color condition",
    )
    icc.add_argument("--algo", required=True)
    icc.set_defaults(run=cmd_icc)

    validate = sub.add_parser(
        "validate", parents=[output],
        help="parse and semantic-check an algorithm",
    )
    validate.add_argument("--algo", required=True)
    validate.set_defaults(run=cmd_validate)

    replay = sub.add_parser(
        "replay", parents=[spec_opts, output],
        help="re-certify a saved counterexample trace",
    )
    replay.add_argument("trace", help="trace file to certify")
    replay.add_argument("--algo", help="override the algorithm in the header")
    replay.add_argument(
        "--sched", choices=sorted(SCHEDULER_NAMES),
        help="override the scheduler in the header",
    )
    replay.add_argument("--fairness", type=int, metavar="N")
    replay.add_argument("--lc-includes-begmove", action="store_true")
    replay.set_defaults(run=cmd_replay)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        return args.run(args)
    except CliError as exc:
        print(f"rvcheck {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
