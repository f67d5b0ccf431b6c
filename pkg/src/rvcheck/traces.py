"""Lasso trace serialization.

Two interchangeable formats carry the same data:

  * a line-oriented text form meant for eyeballing and for the replay
    command, and
  * a JSON form for tooling.

Both record the run metadata (algorithm name, scheduler, fairness bound,
block-shape flag, rigidity), the initial configuration, and the stitched
prefix + cycle step lists.  ``save_trace`` picks the format from the file
suffix; ``load_trace`` sniffs the content.

Text grammar, one record per file::

    RVTRACE v1
    ALGO <name>
    SCHED <centralized|fsync|ssync|async|async-lc|async-move>
    FAIRNESS <int>
    LC-INCLUDES-BEGMOVE 1        (only when set)
    NONRIGID 1                   (only when set)
    INIT dist=<SAME|NEAR|FAR> A=<robot> B=<robot>
    STEP <i> robot=<A|B|AB> events=<E+E|FSYNC_ROUND> -> dist=<D> A=<robot> B=<robot>
    CYCLE-START
    STEP <i> ...

where ``<robot>`` is ``(COLOR,PHASE,PENDING_MOVE,PENDING_COLOR,moving|idle)``
with ``-`` for an empty pending color, and step numbering runs straight
through the prefix into the cycle.  ``robot=AB`` covers both robots: with
``FSYNC_ROUND`` it is the synchronous round, with an event list it is the
simultaneous block firing that run for both robots at one instant.
Non-rigid steps append `` counter=<k>`` with the cumulative interruption
count.

Rigid text traces do not spell out fairness bookkeeping; the parser
reconstructs it by folding the block sequence from (None, 0).  Non-rigid
traces quotient it away entirely, so every parsed configuration keeps the
blank record.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional, Tuple, Union

from .model import (
    Color,
    Configuration,
    Distance,
    FairRun,
    InvariantError,
    Move,
    Phase,
    ROBOT_NAMES,
    RobotState,
)
from .scheduling import FSYNC_ROUND, EventBlock, updated_fair
from .checker import LassoTrace, TraceStep


class TraceFormatError(ValueError):
    """Raised when serialized trace data does not parse or self-check."""


@dataclass(frozen=True)
class TraceMeta:
    """Run metadata stored alongside a trace."""

    algorithm: str
    scheduler: str
    fairness_bound: int
    lc_includes_begmove: bool = False
    nonrigid: bool = False


# config rendering

def _render_robot(state: RobotState) -> str:
    pcolor = "-" if state.pending_color is None else state.pending_color.name
    flag = "moving" if state.is_moving else "idle"
    return (
        f"({state.color.name},{state.phase.name},"
        f"{state.pending_move.name},{pcolor},{flag})"
    )


_ROBOT_RE = re.compile(
    r"\((?P<color>[A-Z]+),(?P<phase>[A-Z]+),(?P<pmove>[A-Z_]+),"
    r"(?P<pcolor>[A-Z]+|-),(?P<flag>moving|idle)\)$"
)


def _parse_robot(text: str) -> RobotState:
    m = _ROBOT_RE.match(text)
    if m is None:
        raise TraceFormatError(f"bad robot field {text!r}")
    try:
        state = RobotState(
            color=Color[m.group("color")],
            phase=Phase[m.group("phase")],
            pending_move=Move[m.group("pmove")],
            pending_color=(
                None if m.group("pcolor") == "-" else Color[m.group("pcolor")]
            ),
        )
    except (KeyError, InvariantError) as exc:
        raise TraceFormatError(f"bad robot field {text!r}: {exc}") from exc
    derived = "moving" if state.is_moving else "idle"
    if derived != m.group("flag"):
        raise TraceFormatError(
            f"robot field {text!r} claims {m.group('flag')} but is {derived}"
        )
    return state


def _render_config_fields(config: Configuration) -> str:
    a, b = config.robots
    return (
        f"dist={config.distance.name} "
        f"A={_render_robot(a)} B={_render_robot(b)}"
    )


def _parse_config_fields(
    text: str, fair: FairRun, where: str
) -> Configuration:
    m = re.match(r"dist=(\w+) A=(\S+) B=(\S+)$", text)
    if m is None:
        raise TraceFormatError(f"bad configuration fields in {where}: {text!r}")
    try:
        distance = Distance[m.group(1)]
    except KeyError as exc:
        raise TraceFormatError(f"bad distance in {where}: {m.group(1)}") from exc
    return Configuration(
        distance=distance,
        robots=(_parse_robot(m.group(2)), _parse_robot(m.group(3))),
        fair_run=fair,
    )


# block rendering

def _render_block(block: EventBlock) -> Tuple[str, str]:
    if block.is_round:
        return "AB", "FSYNC_ROUND"
    events = "+".join(e.name for e in block.events)
    if block.robot is None:
        return "AB", events  # both robots fire the run at one instant
    return ROBOT_NAMES[block.robot], events


def _parse_block(robot_text: str, events_text: str, where: str) -> EventBlock:
    if robot_text == "AB":
        if events_text == "FSYNC_ROUND":
            return FSYNC_ROUND
        try:
            events = tuple(Phase[name] for name in events_text.split("+"))
            return EventBlock(None, events)
        except (KeyError, InvariantError) as exc:
            raise TraceFormatError(
                f"bad simultaneous events {events_text!r} in {where}"
            ) from exc
    try:
        robot = ROBOT_NAMES.index(robot_text)
    except ValueError as exc:
        raise TraceFormatError(f"bad robot {robot_text!r} in {where}") from exc
    try:
        events = tuple(Phase[name] for name in events_text.split("+"))
        return EventBlock(robot, events)
    except (KeyError, InvariantError) as exc:
        raise TraceFormatError(f"bad events {events_text!r} in {where}") from exc


# text format

def render_trace_text(trace: LassoTrace, meta: TraceMeta) -> str:
    lines = [
        "RVTRACE v1",
        f"ALGO {meta.algorithm}",
        f"SCHED {meta.scheduler}",
        f"FAIRNESS {meta.fairness_bound}",
    ]
    if meta.lc_includes_begmove:
        lines.append("LC-INCLUDES-BEGMOVE 1")
    if meta.nonrigid != trace.nonrigid:
        raise TraceFormatError("metadata rigidity disagrees with the trace")
    if meta.nonrigid:
        lines.append("NONRIGID 1")
    lines.append(f"INIT {_render_config_fields(trace.initial)}")
    index = 0
    for part, steps in (("prefix", trace.prefix), ("cycle", trace.cycle)):
        if part == "cycle":
            lines.append("CYCLE-START")
        for step in steps:
            robot_text, events_text = _render_block(step.block)
            line = (
                f"STEP {index} robot={robot_text} events={events_text} "
                f"-> {_render_config_fields(step.config)}"
            )
            if meta.nonrigid:
                line += f" counter={step.counter}"
            lines.append(line)
            index += 1
    return "\n".join(lines) + "\n"


_STEP_RE = re.compile(
    r"STEP (?P<idx>\d+) robot=(?P<robot>A|B|AB) events=(?P<events>\S+) "
    r"-> (?P<config>dist=\S+ A=\S+ B=\S+)(?: counter=(?P<counter>\d+))?$"
)


def parse_trace_text(text: str) -> Tuple[LassoTrace, TraceMeta]:
    lines = [ln.rstrip() for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0] != "RVTRACE v1":
        raise TraceFormatError("missing RVTRACE v1 header")

    header = {"LC-INCLUDES-BEGMOVE": None, "NONRIGID": None}
    required = {"ALGO": None, "SCHED": None, "FAIRNESS": None}
    pos = 1
    while pos < len(lines) and not lines[pos].startswith("INIT "):
        key, _, value = lines[pos].partition(" ")
        if key in required and required[key] is None:
            required[key] = value
        elif key in header and header[key] is None:
            header[key] = value
        else:
            raise TraceFormatError(f"unexpected header line {lines[pos]!r}")
        pos += 1
    missing = [k for k, v in required.items() if v is None]
    if missing:
        raise TraceFormatError(f"missing header lines: {', '.join(missing)}")
    if pos >= len(lines):
        raise TraceFormatError("missing INIT line")
    try:
        fairness = int(required["FAIRNESS"])
    except ValueError as exc:
        raise TraceFormatError(
            f"bad FAIRNESS value {required['FAIRNESS']!r}"
        ) from exc
    for key in ("LC-INCLUDES-BEGMOVE", "NONRIGID"):
        if header[key] not in (None, "1"):
            raise TraceFormatError(f"{key} takes 1, got {header[key]!r}")
    meta = TraceMeta(
        algorithm=required["ALGO"],
        scheduler=required["SCHED"],
        fairness_bound=fairness,
        lc_includes_begmove=header["LC-INCLUDES-BEGMOVE"] == "1",
        nonrigid=header["NONRIGID"] == "1",
    )

    fair = FairRun(None, 0)
    initial = _parse_config_fields(lines[pos][len("INIT "):], fair, "INIT")
    pos += 1

    prefix: List[TraceStep] = []
    cycle: List[TraceStep] = []
    current = prefix
    expected = 0
    counter = 0
    for line in lines[pos:]:
        if line == "CYCLE-START":
            if current is cycle:
                raise TraceFormatError("duplicate CYCLE-START")
            current = cycle
            continue
        m = _STEP_RE.match(line)
        if m is None:
            raise TraceFormatError(f"bad step line {line!r}")
        if int(m.group("idx")) != expected:
            raise TraceFormatError(
                f"step numbering jumps to {m.group('idx')} at index {expected}"
            )
        where = f"STEP {expected}"
        block = _parse_block(m.group("robot"), m.group("events"), where)
        if meta.nonrigid:
            if m.group("counter") is None:
                raise TraceFormatError(f"{where} lacks a counter")
            counter = int(m.group("counter"))
        else:
            if m.group("counter") is not None:
                raise TraceFormatError(f"{where} carries a counter")
            fair = updated_fair(fair, block)
        config = _parse_config_fields(m.group("config"), fair, where)
        current.append(TraceStep(block=block, config=config, counter=counter))
        expected += 1

    if current is prefix:
        raise TraceFormatError("missing CYCLE-START")
    try:
        trace = LassoTrace(
            initial=initial,
            prefix=tuple(prefix),
            cycle=tuple(cycle),
            nonrigid=meta.nonrigid,
        )
    except InvariantError as exc:
        raise TraceFormatError(str(exc)) from exc
    return trace, meta


# json format

def _config_to_json(config: Configuration) -> dict:
    fair = config.fair_run
    return {
        "distance": config.distance.name,
        "fair": (
            None
            if fair.last_active is None
            else {"robot": fair.last_active, "streak": fair.streak}
        ),
        "robots": [
            {
                "color": r.color.name,
                "phase": r.phase.name,
                "pending_move": r.pending_move.name,
                "pending_color": (
                    None if r.pending_color is None else r.pending_color.name
                ),
            }
            for r in config.robots
        ],
    }


def _config_from_json(data: dict, where: str) -> Configuration:
    try:
        fair_data = data["fair"]
        fair = (
            FairRun(None, 0)
            if fair_data is None
            else FairRun(int(fair_data["robot"]), int(fair_data["streak"]))
        )
        robots = tuple(
            RobotState(
                color=Color[r["color"]],
                phase=Phase[r["phase"]],
                pending_move=Move[r["pending_move"]],
                pending_color=(
                    None
                    if r["pending_color"] is None
                    else Color[r["pending_color"]]
                ),
            )
            for r in data["robots"]
        )
        if len(robots) != 2:
            raise TraceFormatError(f"{where} needs exactly two robots")
        return Configuration(
            distance=Distance[data["distance"]],
            robots=robots,
            fair_run=fair,
        )
    except TraceFormatError:
        raise
    except (KeyError, TypeError, ValueError, InvariantError) as exc:
        raise TraceFormatError(f"bad configuration in {where}: {exc}") from exc


def _step_to_json(step: TraceStep) -> dict:
    robot_text, events_text = _render_block(step.block)
    return {
        "robot": robot_text,
        "events": events_text,
        "config": _config_to_json(step.config),
        "counter": step.counter,
    }


def _step_from_json(data: dict, where: str) -> TraceStep:
    try:
        block = _parse_block(str(data["robot"]), str(data["events"]), where)
        counter = int(data.get("counter", 0))
    except TraceFormatError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise TraceFormatError(f"bad step in {where}: {exc}") from exc
    return TraceStep(
        block=block,
        config=_config_from_json(data["config"], where),
        counter=counter,
    )


def render_trace_json(trace: LassoTrace, meta: TraceMeta) -> str:
    if meta.nonrigid != trace.nonrigid:
        raise TraceFormatError("metadata rigidity disagrees with the trace")
    doc = {
        "format": "rvcheck-trace",
        "version": 1,
        "algorithm": meta.algorithm,
        "scheduler": meta.scheduler,
        "fairness_bound": meta.fairness_bound,
        "lc_includes_begmove": meta.lc_includes_begmove,
        "nonrigid": meta.nonrigid,
        "initial": _config_to_json(trace.initial),
        "prefix": [_step_to_json(s) for s in trace.prefix],
        "cycle": [_step_to_json(s) for s in trace.cycle],
    }
    return json.dumps(doc, indent=2) + "\n"


def parse_trace_json(text: str) -> Tuple[LassoTrace, TraceMeta]:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise TraceFormatError(f"not valid JSON: {exc}") from exc
    if not isinstance(doc, dict) or doc.get("format") != "rvcheck-trace":
        raise TraceFormatError("not a rvcheck-trace document")
    if doc.get("version") != 1:
        raise TraceFormatError(f"unsupported version {doc.get('version')!r}")
    try:
        meta = TraceMeta(
            algorithm=str(doc["algorithm"]),
            scheduler=str(doc["scheduler"]),
            fairness_bound=int(doc["fairness_bound"]),
            lc_includes_begmove=bool(doc.get("lc_includes_begmove", False)),
            nonrigid=bool(doc.get("nonrigid", False)),
        )
        prefix = tuple(
            _step_from_json(s, f"prefix[{i}]")
            for i, s in enumerate(doc["prefix"])
        )
        cycle = tuple(
            _step_from_json(s, f"cycle[{i}]")
            for i, s in enumerate(doc["cycle"])
        )
        trace = LassoTrace(
            initial=_config_from_json(doc["initial"], "initial"),
            prefix=prefix,
            cycle=cycle,
            nonrigid=meta.nonrigid,
        )
    except TraceFormatError:
        raise
    except (KeyError, TypeError, ValueError, InvariantError) as exc:
        raise TraceFormatError(f"bad trace document: {exc}") from exc
    return trace, meta


# file level

def save_trace(
    path: Union[str, Path], trace: LassoTrace, meta: TraceMeta
) -> None:
    """Write the trace to ``path``; a ``.json`` suffix selects JSON."""
    path = Path(path)
    if path.suffix.lower() == ".json":
        text = render_trace_json(trace, meta)
    else:
        text = render_trace_text(trace, meta)
    path.write_text(text, encoding="utf-8")


def load_trace(path: Union[str, Path]) -> Tuple[LassoTrace, TraceMeta]:
    """Read a trace in either format, sniffing by content."""
    text = Path(path).read_text(encoding="utf-8")
    stripped = text.lstrip()
    if stripped.startswith("{"):
        return parse_trace_json(text)
    return parse_trace_text(text)
