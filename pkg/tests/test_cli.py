"""Command line behaviour: exit codes, output modes, env handling."""

import json
import re

import pytest

from rvcheck.cli import (
    EXIT_CLEAN,
    EXIT_LIMIT,
    EXIT_USAGE,
    EXIT_VIOLATED,
    GOLDEN_VERDICTS,
    TABLE_COLUMNS,
    main,
)


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


# check

def test_check_pass_exit_zero(capsys):
    code, out, _ = run(capsys, "check", "--algo", "Vig2Cols", "--sched", "ssync")
    assert code == EXIT_CLEAN
    assert "Vig2Cols under ssync: PASS" in out
    assert "states" in out


def test_check_fail_exit_one(capsys):
    code, out, _ = run(capsys, "check", "--algo", "Vig2Cols", "--sched", "async")
    assert code == EXIT_VIOLATED
    assert "Vig2Cols under async: FAIL" in out
    assert "lasso: prefix" in out


def test_check_accepts_case_insensitive_name(capsys):
    code, out, _ = run(capsys, "check", "--algo", "vig2cols", "--sched", "ssync")
    assert code == EXIT_CLEAN
    assert "Vig2Cols" in out


def test_check_unknown_algorithm_is_usage_error(capsys):
    code, _, err = run(capsys, "check", "--algo", "NoSuchAlgo", "--sched", "ssync")
    assert code == EXIT_USAGE
    assert "unknown algorithm" in err


def test_check_unknown_scheduler_is_usage_error(capsys):
    code, _, err = run(capsys, "check", "--algo", "Vig2Cols", "--sched", "bogus")
    assert code == EXIT_USAGE
    assert "invalid choice" in err


def test_check_writes_replayable_trace(tmp_path, capsys):
    path = tmp_path / "counterexample.txt"
    code, out, _ = run(
        capsys, "check", "--algo", "Vig2Cols", "--sched", "async",
        "--trace", str(path),
    )
    assert code == EXIT_VIOLATED
    assert f"trace written to {path}" in out
    assert path.exists()

    code, out, _ = run(capsys, "replay", str(path))
    assert code == EXIT_CLEAN
    assert "certified against Vig2Cols under async" in out


def test_check_writes_json_trace_by_suffix(tmp_path, capsys):
    path = tmp_path / "counterexample.json"
    code, _, _ = run(
        capsys, "check", "--algo", "Oku4ColsX", "--sched", "async-lc",
        "--trace", str(path),
    )
    assert code == EXIT_VIOLATED
    doc = json.loads(path.read_text())
    assert doc["format"] == "rvcheck-trace"

    code, out, _ = run(capsys, "replay", str(path))
    assert code == EXIT_CLEAN
    assert "certified" in out


def test_check_max_states_flag_hits_limit(capsys):
    code, _, err = run(
        capsys, "check", "--algo", "Vig2Cols", "--sched", "async",
        "--max-states", "64",
    )
    assert code == EXIT_LIMIT
    assert "resource limit" in err


def test_check_env_budget_applies(monkeypatch, capsys):
    monkeypatch.setenv("RVCHECK_MAX_STATES", "64")
    code, _, err = run(capsys, "check", "--algo", "Vig2Cols", "--sched", "async")
    assert code == EXIT_LIMIT
    assert "resource limit" in err


def test_check_flag_beats_env(monkeypatch, capsys):
    monkeypatch.setenv("RVCHECK_MAX_STATES", "64")
    code, out, _ = run(
        capsys, "check", "--algo", "Vig2Cols", "--sched", "async",
        "--max-states", "10000000",
    )
    assert code == EXIT_VIOLATED
    assert "FAIL" in out


def test_check_bad_env_value_is_usage_error(monkeypatch, capsys):
    monkeypatch.setenv("RVCHECK_MAX_STATES", "plenty")
    code, _, err = run(capsys, "check", "--algo", "Vig2Cols", "--sched", "ssync")
    assert code == EXIT_USAGE
    assert "not a number" in err


def test_check_json_output_is_structured_only(capsys):
    code, out, _ = run(
        capsys, "check", "--algo", "Vig2Cols", "--sched", "async", "--json"
    )
    assert code == EXIT_VIOLATED
    doc = json.loads(out)
    assert doc["format"] == "rvcheck-report"
    assert doc["command"] == "check"
    assert doc["verdict"] == "FAIL"
    assert doc["lasso"]["cycle_length"] >= 1
    assert "under async" not in out.replace(json.dumps(doc), "")


def test_check_report_file_alongside_human_lines(tmp_path, capsys):
    report = tmp_path / "report.json"
    code, out, _ = run(
        capsys, "check", "--algo", "Vig2Cols", "--sched", "ssync",
        "--report", str(report),
    )
    assert code == EXIT_CLEAN
    assert "PASS" in out
    doc = json.loads(report.read_text())
    assert doc["verdict"] == "PASS"
    assert doc["stats"]["stored_states"] > 0


def test_check_nonrigid_fixed_black_fails_and_replays(tmp_path, capsys):
    path = tmp_path / "nonrigid.txt"
    code, out, _ = run(
        capsys, "check", "--algo", "Vig2Cols", "--sched", "async",
        "--init", "fixed:BLACK", "--nonrigid", "--trace", str(path),
    )
    assert code == EXIT_VIOLATED
    assert "FAIL" in out

    code, out, _ = run(capsys, "replay", str(path))
    assert code == EXIT_CLEAN
    assert "certified" in out


def test_check_bad_init_token_is_usage_error(capsys):
    code, _, err = run(
        capsys, "check", "--algo", "Vig2Cols", "--sched", "ssync",
        "--init", "sideways",
    )
    assert code == EXIT_USAGE
    assert "bad --init" in err


def test_check_rejects_unsafe_light_override(capsys):
    # Vig2Cols reads its own color, so forcing external lights must refuse
    code, _, err = run(
        capsys, "check", "--algo", "Vig2Cols", "--sched", "ssync",
        "--lights", "external",
    )
    assert code == EXIT_USAGE
    assert "not safe to explore" in err


# table

def test_table_subset_marks(capsys):
    code, out, _ = run(
        capsys, "table", "--rows", "Vig2Cols", "--cols", "ssync,async"
    )
    assert code == EXIT_CLEAN
    lines = out.strip().splitlines()
    assert "ssync" in lines[0] and "async" in lines[0]
    row = next(line for line in lines if line.startswith("Vig2Cols"))
    marks = row.split()[1:]
    assert marks == ["✓", "-"]


def test_table_subset_golden_match(capsys):
    code, out, _ = run(
        capsys, "table", "--rows", "Vig2Cols,Oku3ColsX", "--cols",
        "centralized,ssync", "--golden",
    )
    assert code == EXIT_CLEAN
    assert "matrix matches the golden table (2x2)" in out


def test_table_unknown_row_is_usage_error(capsys):
    code, _, err = run(capsys, "table", "--rows", "Vig9Cols")
    assert code == EXIT_USAGE
    assert "unknown table row" in err


def test_table_unknown_column_is_usage_error(capsys):
    code, _, err = run(capsys, "table", "--cols", "sometimes")
    assert code == EXIT_USAGE
    assert "unknown table column" in err


def test_table_limit_marks_cell_and_exits_three(capsys):
    code, out, _ = run(
        capsys, "table", "--rows", "Vig3Cols", "--cols", "async",
        "--max-states", "64",
    )
    assert code == EXIT_LIMIT
    row = next(l for l in out.splitlines() if l.startswith("Vig3Cols"))
    assert "!" in row


def test_table_limit_wins_over_golden_mismatch(capsys):
    code, out, _ = run(
        capsys, "table", "--rows", "Vig3Cols", "--cols", "async",
        "--max-states", "64", "--golden",
    )
    assert code == EXIT_LIMIT
    assert "got limit" in out


def test_table_json_document_shape(capsys):
    code, out, _ = run(
        capsys, "table", "--rows", "Vig2Cols", "--cols", "ssync", "--json"
    )
    assert code == EXIT_CLEAN
    doc = json.loads(out)
    assert doc["command"] == "table"
    assert doc["columns"] == ["ssync"]
    assert doc["rows"][0]["algorithm"] == "Vig2Cols"
    assert doc["rows"][0]["cells"][0]["verdict"] == "PASS"
    assert doc["golden_match"] is None


def test_golden_table_constants_are_consistent():
    assert len(GOLDEN_VERDICTS) == 12
    assert len(TABLE_COLUMNS) == 6
    for row, letters in GOLDEN_VERDICTS.items():
        assert len(letters) == 6, row
        assert set(letters) <= {"P", "F"}


# icc

def test_icc_satisfied_exit_zero(capsys):
    code, out, _ = run(capsys, "icc", "--algo", "Vig3Cols")
    assert code == EXIT_CLEAN
    assert "identical color condition satisfied" in out


def test_icc_violated_lists_witnesses(capsys):
    code, out, _ = run(capsys, "icc", "--algo", "Flo3ColsX")
    assert code == EXIT_VIOLATED
    assert "identical color condition violated" in out
    assert re.search(r"changes color on \(\w+, \w+\)", out)


def test_icc_json_witness_pairs(capsys):
    code, out, _ = run(capsys, "icc", "--algo", "Oku5ColsX", "--json")
    assert code == EXIT_VIOLATED
    doc = json.loads(out)
    assert doc["satisfied"] is False
    assert doc["witnesses"]
    assert all(len(pair) == 2 for pair in doc["witnesses"])


# validate

def test_validate_builtin_clean(capsys):
    code, out, _ = run(capsys, "validate", "--algo", "Her2Cols")
    assert code == EXIT_CLEAN
    assert "clean" in out


def test_validate_clean_file(tmp_path, capsys):
    from rvcheck.algorithms import builtin, render_algorithm

    path = tmp_path / "fine.rv"
    path.write_text(render_algorithm(builtin("Vig2Cols")))
    code, out, _ = run(capsys, "validate", "--algo", str(path))
    assert code == EXIT_CLEAN
    assert "clean" in out


def test_validate_broken_file_lists_diagnostics(tmp_path, capsys):
    path = tmp_path / "broken.rv"
    path.write_text(
        "algorithm Broken\n"
        "colors BLACK WHITE\n"
        "rule (BLACK, WHITE) -> RED, HALF\n"
    )
    code, out, _ = run(capsys, "validate", "--algo", str(path))
    assert code == EXIT_VIOLATED
    assert "not clean" in out
    assert "undeclared" in out


def test_validate_missing_path_is_usage_error(capsys):
    code, _, err = run(capsys, "validate", "--algo", "/nope/missing.rv")
    assert code == EXIT_USAGE
    assert "no algorithm named or stored at" in err


def test_validate_json_diagnostics(tmp_path, capsys):
    path = tmp_path / "broken.rv"
    path.write_text(
        "algorithm Broken\n"
        "colors BLACK\n"
        "rule (BLACK, BLACK) -> BLACK, BACKWARDS\n"
    )
    code, out, _ = run(capsys, "validate", "--algo", str(path), "--json")
    assert code == EXIT_VIOLATED
    doc = json.loads(out)
    assert doc["clean"] is False
    assert any("unknown move" in d["message"] for d in doc["diagnostics"])
    assert all({"line", "col", "severity", "message"} <= set(d) for d in doc["diagnostics"])


# replay

def test_replay_missing_file_is_usage_error(capsys):
    code, _, err = run(capsys, "replay", "/nope/trace.txt")
    assert code == EXIT_USAGE
    assert "cannot read" in err


def test_replay_corrupt_file_is_usage_error(tmp_path, capsys):
    path = tmp_path / "garbage.txt"
    path.write_text("not a trace at all\n")
    code, _, err = run(capsys, "replay", str(path))
    assert code == EXIT_USAGE
    assert "missing RVTRACE v1 header" in err


def test_replay_wrong_scheduler_diverges(tmp_path, capsys):
    path = tmp_path / "t.txt"
    run(capsys, "check", "--algo", "Vig2Cols", "--sched", "async",
        "--trace", str(path))

    code, out, _ = run(capsys, "replay", str(path), "--sched", "fsync")
    assert code == EXIT_VIOLATED
    assert "diverges at step" in out
    assert "block not enabled" in out


def test_replay_wrong_algorithm_diverges(tmp_path, capsys):
    path = tmp_path / "t.txt"
    run(capsys, "check", "--algo", "Vig2Cols", "--sched", "async",
        "--trace", str(path))

    code, out, _ = run(capsys, "replay", str(path), "--algo", "Vig3Cols")
    assert code == EXIT_VIOLATED
    assert "diverges" in out


def test_replay_json_reports_reason(tmp_path, capsys):
    path = tmp_path / "t.txt"
    run(capsys, "check", "--algo", "Vig2Cols", "--sched", "async",
        "--trace", str(path))

    code, out, _ = run(capsys, "replay", str(path), "--sched", "fsync", "--json")
    assert code == EXIT_VIOLATED
    doc = json.loads(out)
    assert doc["ok"] is False
    assert doc["step_index"] is not None
    assert doc["reason"]


# top level

def test_no_subcommand_is_usage_error(capsys):
    assert main([]) == EXIT_USAGE
    capsys.readouterr()


def test_help_exits_zero(capsys):
    assert main(["--help"]) == 0
    out = capsys.readouterr().out
    for name in ("check", "table", "icc", "validate", "replay"):
        assert name in out
