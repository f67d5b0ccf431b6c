import json
import re

import pytest

from rvcheck.model import Color
from rvcheck.algorithms import InitRegime, builtin
from rvcheck.scheduling import SchedulerKind
from rvcheck.checker import certify, explore, nonrigid_explore
from rvcheck.traces import (
    TraceFormatError,
    TraceMeta,
    load_trace,
    parse_trace_json,
    parse_trace_text,
    render_trace_json,
    render_trace_text,
    save_trace,
)


@pytest.fixture(scope="module")
def rigid_case():
    graph, verdict = explore(builtin("Vig2Cols"), SchedulerKind.ASYNC)
    meta = TraceMeta("Vig2Cols", "async", graph.bound)
    return verdict.trace, meta


@pytest.fixture(scope="module")
def round_case():
    graph, verdict = explore(builtin("ToHalf"), SchedulerKind.SSYNC)
    meta = TraceMeta("ToHalf", "ssync", graph.bound)
    return verdict.trace, meta


@pytest.fixture(scope="module")
def joint_case():
    graph, verdict = explore(builtin("Oku4ColsX"), SchedulerKind.ASYNC_LC)
    meta = TraceMeta("Oku4ColsX", "async-lc", graph.bound)
    return verdict.trace, meta


@pytest.fixture(scope="module")
def nonrigid_case():
    spec = builtin("Vig2Cols").with_init_regime(InitRegime.fixed(Color.BLACK))
    verdict = nonrigid_explore(spec, SchedulerKind.ASYNC)
    meta = TraceMeta("Vig2Cols", "async", 16, nonrigid=True)
    return verdict.trace, meta


CASES = ["rigid_case", "round_case", "joint_case", "nonrigid_case"]


@pytest.mark.parametrize("case", CASES)
def test_text_round_trip(case, request):
    trace, meta = request.getfixturevalue(case)
    text = render_trace_text(trace, meta)
    back, back_meta = parse_trace_text(text)
    assert back == trace
    assert back_meta == meta


@pytest.mark.parametrize("case", CASES)
def test_json_round_trip(case, request):
    trace, meta = request.getfixturevalue(case)
    doc = render_trace_json(trace, meta)
    json.loads(doc)  # must be plain JSON
    back, back_meta = parse_trace_json(doc)
    assert back == trace
    assert back_meta == meta


@pytest.mark.parametrize("case", CASES)
@pytest.mark.parametrize("suffix", [".txt", ".json"])
def test_save_load(tmp_path, case, suffix, request):
    trace, meta = request.getfixturevalue(case)
    path = tmp_path / f"trace{suffix}"
    save_trace(path, trace, meta)
    back, back_meta = load_trace(path)
    assert back == trace
    assert back_meta == meta


def test_parsed_rigid_trace_still_certifies(rigid_case):
    trace, meta = rigid_case
    text = render_trace_text(trace, meta)
    back, back_meta = parse_trace_text(text)
    assert certify(
        back, builtin(back_meta.algorithm), SchedulerKind.ASYNC,
        back_meta.fairness_bound,
    ).ok


def test_text_shape(joint_case):
    trace, meta = joint_case
    lines = render_trace_text(trace, meta).splitlines()
    assert lines[0] == "RVTRACE v1"
    assert lines.count("CYCLE-START") == 1
    assert any(line.startswith("INIT dist=") for line in lines)
    # the simultaneous block spells both robots with its event run
    assert any("robot=AB events=LOOK+COMPUTE" in line for line in lines)


def test_nonrigid_text_carries_counters(nonrigid_case):
    trace, meta = nonrigid_case
    lines = render_trace_text(trace, meta).splitlines()
    step_lines = [l for l in lines if l.startswith("STEP ")]
    assert all(" counter=" in l for l in step_lines)
    assert "NONRIGID 1" in lines


def mutate(text, old, new, count=1):
    assert old in text
    return text.replace(old, new, count)


def test_parse_rejections(rigid_case, nonrigid_case):
    trace, meta = rigid_case
    text = render_trace_text(trace, meta)
    nr_text = render_trace_text(*nonrigid_case)
    bad = [
        (mutate(text, "RVTRACE v1", "RVTRACE v2"), "header"),
        (mutate(text, "CYCLE-START", "CYCLE START"), "bad step line"),
        (mutate(text, "STEP 0 ", "STEP 7 "), "numbering"),
        (mutate(text, "ALGO", "ALGORITHM"), "unexpected header"),
        (mutate(text, "dist=NEAR", "dist=CLOSE", 1), "distance"),
        (text + "garbage\n", "bad step line"),
        # a counter where none belongs, and a missing one where it does
        (re.sub(r"(STEP 0 [^\n]*)", r"\1 counter=2", text, count=1), "counter"),
        (mutate(nr_text, " counter=0", "", 1), "counter"),
    ]
    for doctored, needle in bad:
        with pytest.raises(TraceFormatError, match=needle):
            parse_trace_text(doctored)


def test_parse_rejects_flag_lies(rigid_case):
    trace, meta = rigid_case
    text = render_trace_text(trace, meta)
    if ",idle)" in text:
        doctored = text.replace(",idle)", ",moving)", 1)
    else:
        doctored = text.replace(",moving)", ",idle)", 1)
    with pytest.raises(TraceFormatError, match="claims"):
        parse_trace_text(doctored)


def test_parse_rejects_malformed_simultaneous_events(joint_case):
    trace, meta = joint_case
    text = render_trace_text(trace, meta)
    doctored = text.replace("robot=AB events=LOOK+COMPUTE",
                            "robot=AB events=COMPUTE+BEGMOVE", 1)
    with pytest.raises(TraceFormatError, match="simultaneous"):
        parse_trace_text(doctored)


def test_meta_rigidity_must_match_trace(rigid_case):
    trace, meta = rigid_case
    wrong = TraceMeta(meta.algorithm, meta.scheduler, meta.fairness_bound,
                      nonrigid=True)
    with pytest.raises(TraceFormatError):
        render_trace_text(trace, wrong)


def test_json_rejections(rigid_case):
    trace, meta = rigid_case
    doc = json.loads(render_trace_json(trace, meta))
    broken = dict(doc)
    del broken["cycle"]
    with pytest.raises(TraceFormatError):
        parse_trace_json(json.dumps(broken))
    with pytest.raises(TraceFormatError):
        parse_trace_json("[1, 2, 3]")
    with pytest.raises(TraceFormatError):
        parse_trace_json("not json at all")
    relabeled = dict(doc, format="something-else")
    with pytest.raises(TraceFormatError):
        parse_trace_json(json.dumps(relabeled))


def test_load_sniffs_content_not_suffix(tmp_path, rigid_case):
    trace, meta = rigid_case
    oddly_named = tmp_path / "trace.dat"
    oddly_named.write_text(render_trace_json(trace, meta), encoding="utf-8")
    back, _ = load_trace(oddly_named)
    assert back == trace
    textual = tmp_path / "trace.json"  # lying suffix
    textual.write_text(render_trace_text(trace, meta), encoding="utf-8")
    back, _ = load_trace(textual)
    assert back == trace
