"""Rule tables: parsing, rendering, validation, evaluation, and the static
identical-color-condition scan."""

import pytest
from hypothesis import given, strategies as st

from rvcheck.model import Color, LightModel, Move, Observation
from rvcheck.algorithms import (
    Action,
    AlgorithmSpec,
    BUILTIN_NAMES,
    Guard,
    InitKind,
    InitRegime,
    Rigidity,
    Rule,
    UnknownAlgorithmError,
    builtin,
    check_icc,
    load_algorithm_file,
    parse_algorithm,
    render_algorithm,
    validate_spec,
)

B, W, R, Y, G = Color.BLACK, Color.WHITE, Color.RED, Color.YELLOW, Color.GREEN
STAY, HALF, OTHER = Move.STAY, Move.TO_HALF, Move.TO_OTHER


def decide(spec, me, other, gathered=False, moving=False):
    return spec.evaluate(Observation(me, other, gathered, moving))


# --- round-trip -------------------------------------------------------------


@pytest.mark.parametrize("name", BUILTIN_NAMES)
def test_render_parse_round_trip(name):
    spec = builtin(name)
    text = render_algorithm(spec)
    result = parse_algorithm(text)
    assert result.ok, result.diagnostics
    assert result.spec == spec
    assert render_algorithm(result.spec) == text


def test_builtin_lookup_case_insensitive():
    assert builtin("vig2cols") == builtin("Vig2Cols")
    with pytest.raises(UnknownAlgorithmError):
        builtin("NotAnAlgorithm")


def test_load_algorithm_file(tmp_path):
    path = tmp_path / "mine.rv"
    path.write_text(render_algorithm(builtin("Her2Cols")), encoding="utf-8")
    result = load_algorithm_file(str(path))
    assert result.ok
    assert result.spec == builtin("Her2Cols")


# --- parse diagnostics ------------------------------------------------------


def test_parse_reports_positions():
    result = parse_algorithm(
        "algorithm X\ncolors BLACK\nbogus line here\nrule (*, *) -> -, STAY\n"
    )
    assert not result.ok
    [diag] = result.errors()
    assert diag.line == 3
    assert "unknown keyword" in diag.message


def test_parse_missing_headers():
    result = parse_algorithm("rule (*, *) -> -, STAY\n")
    messages = " | ".join(d.message for d in result.errors())
    assert "missing 'algorithm' header" in messages
    assert "missing 'colors' header" in messages
    assert "after the colors header" in messages


def test_parse_rule_errors():
    bad = [
        ("rule (*, *) STAY", "rule needs exactly one"),
        ("rule (*, *) -> -", "action must be"),
        ("rule (BLACK) -> -, STAY", "guard must be"),
        ("rule (*, *) -> -, SPRINT", "unknown move"),
        ("rule (PURPLE, *) -> -, STAY", "unknown color"),
        ("rule (RED, *) -> -, STAY", "undeclared color"),
    ]
    for line, needle in bad:
        result = parse_algorithm(f"algorithm X\ncolors BLACK\n{line}\n")
        assert not result.ok, line
        assert any(needle in d.message for d in result.errors()), (line, result.diagnostics)


def test_parse_duplicate_guard_warns_but_parses():
    result = parse_algorithm(
        "algorithm X\ncolors BLACK\n"
        "rule (*, *) -> -, STAY\nrule (*, *) -> -, HALF\n"
    )
    assert result.ok
    warnings = [d for d in result.diagnostics if d.severity == "warning"]
    assert any("duplicates line 3" in d.message for d in warnings)
    assert any("unreachable" in d.message for d in warnings)


def test_parse_comments_and_blank_lines():
    result = parse_algorithm(
        "# a comment\nalgorithm X\n\ncolors BLACK  # trailing\n"
        "rule (*, *) -> -, STAY\n"
    )
    assert result.ok
    assert result.spec.name == "X"


# --- validation -------------------------------------------------------------


def mk(colors, rules, light=LightModel.FULL, init=None):
    return AlgorithmSpec(
        name="t",
        colors=colors,
        rules=tuple(rules),
        light_model=light,
        init_regime=init or InitRegime.all_pairs(),
    )


def test_validate_accepts_every_builtin():
    for name in BUILTIN_NAMES:
        assert validate_spec(builtin(name)) == []


def test_validate_flags_undeclared_rule_color():
    spec = mk((B,), [Rule(Guard(), Action(W, STAY))])
    assert any("undeclared" in d.message for d in validate_spec(spec))


def test_validate_flags_gaps_in_guard_cover():
    spec = mk((B, W), [Rule(Guard(B, B), Action(None, STAY))])
    diags = validate_spec(spec)
    assert any("no rule matches" in d.message for d in diags)
    # one gap per uncovered observation, gathered and not
    assert len([d for d in diags if "no rule matches" in d.message]) == 6


def test_validate_flags_own_color_guard_under_external_lights():
    spec = mk(
        (B, W),
        [Rule(Guard(me_color=B), Action(None, STAY)), Rule(Guard(), Action(None, STAY))],
        light=LightModel.EXTERNAL,
    )
    assert any("own color" in d.message for d in validate_spec(spec))
    gathered_ok = mk(
        (B, W),
        [Rule(Guard(gathered_only=True), Action(None, STAY)), Rule(Guard(), Action(None, STAY))],
        light=LightModel.EXTERNAL,
    )
    assert validate_spec(gathered_ok) == []


def test_validate_flags_reserved_moves():
    spec = mk((B,), [Rule(Guard(), Action(None, Move.MISS))])
    assert any("not allowed" in d.message for d in validate_spec(spec))


def test_validate_flags_fixed_init_outside_colors():
    spec = mk(
        (B, W),
        [Rule(Guard(), Action(None, STAY))],
        init=InitRegime.fixed(R),
    )
    assert any("init color" in d.message for d in validate_spec(spec))


def test_validate_flags_duplicate_colors():
    spec = mk((B, B), [Rule(Guard(), Action(None, STAY))])
    assert any("duplicate" in d.message for d in validate_spec(spec))


# --- evaluation golden tables -----------------------------------------------
# Expected decisions are written out by hand from the published rule tables,
# then checked against evaluate() over every observation.


def test_vig2cols_decision_table():
    spec = builtin("Vig2Cols")
    expected = {
        (B, B): (W, STAY),
        (B, W): (B, STAY),
        (W, B): (W, OTHER),
        (W, W): (B, HALF),
    }
    for (me, other), want in expected.items():
        assert decide(spec, me, other) == want


def test_vig3cols_decision_table():
    spec = builtin("Vig3Cols")
    expected = {
        (B, B): (W, HALF),
        (B, W): (B, OTHER),
        (B, R): (B, STAY),
        (W, B): (W, STAY),
        (W, W): (R, STAY),
        (W, R): (W, OTHER),
        (R, B): (R, OTHER),
        (R, W): (R, STAY),
        (R, R): (B, STAY),
    }
    for (me, other), want in expected.items():
        assert decide(spec, me, other) == want


def test_her2cols_gathered_guard_takes_precedence_over_later_rules():
    spec = builtin("Her2Cols")
    # gathered rule sits third: the two BLACK-me rows above it still win
    assert decide(spec, B, B, gathered=True) == (W, STAY)
    assert decide(spec, W, B, gathered=True) == (W, STAY)
    assert decide(spec, W, W, gathered=True) == (W, STAY)
    assert decide(spec, W, B, gathered=False) == (W, OTHER)


def test_external_light_tables_ignore_own_color():
    for name in ("Flo3ColsX", "Oku5ColsX", "Oku4ColsX", "Oku3ColsX"):
        spec = builtin(name)
        for other in spec.colors:
            decisions = {decide(spec, me, other) for me in spec.colors}
            assert len(decisions) == 1, (name, other)


def test_flo3colsx_decision_table():
    spec = builtin("Flo3ColsX")
    for me in spec.colors:
        assert decide(spec, me, B) == (W, HALF)
        assert decide(spec, me, W) == (R, STAY)
        assert decide(spec, me, R) == (B, OTHER)


def test_oku3colsnss_shares_rules_with_oku3colsx():
    a, b = builtin("Oku3ColsX"), builtin("Oku3ColsNSS")
    assert a.rules == b.rules
    assert a.init_regime.kind is InitKind.ALL_PAIRS
    assert b.init_regime == InitRegime.fixed(B)
    assert b.rigidity is Rigidity.NON_SS


def test_evaluate_totality_for_all_builtins():
    for name in BUILTIN_NAMES:
        spec = builtin(name)
        for me in spec.colors:
            for other in spec.colors:
                for gathered, moving in ((False, False), (False, True), (True, False)):
                    spec.evaluate(Observation(me, other, gathered, moving))


# --- identical color condition ----------------------------------------------


def brute_force_icc(spec):
    """Oracle: collect every observed color pair where the algorithm picks a
    fresh color without seeing identical lights."""
    offending = set()
    for me in spec.colors:
        for other in spec.colors:
            for gathered, moving in ((False, False), (False, True), (True, False)):
                command = spec.evaluate(Observation(me, other, gathered, moving))
                if me is not other and command.new_color is not me:
                    offending.add((me, other))
    return offending


@pytest.mark.parametrize("name", BUILTIN_NAMES)
def test_icc_matches_brute_force(name):
    spec = builtin(name)
    result = check_icc(spec)
    oracle = brute_force_icc(spec)
    assert set(result.witnesses) == oracle
    assert result.satisfied == (not oracle)


def test_icc_witness_example():
    result = check_icc(builtin("Flo3ColsX"))
    assert not result.satisfied
    # every witness names an unequal pair that triggers a recolor
    assert (B, W) in result.witnesses


# --- property: rendering stays parseable ------------------------------------

COLOR_SETS = st.sampled_from(
    [(B,), (B, W), (B, W, R), (B, W, R, Y), (B, W, R, Y, G)]
)


@st.composite
def random_spec(draw):
    colors = draw(COLOR_SETS)
    palette = st.sampled_from(colors)
    maybe_color = st.one_of(st.none(), palette)
    n_rules = draw(st.integers(min_value=1, max_value=6))
    rules = [
        Rule(
            Guard(draw(maybe_color), draw(maybe_color), False),
            Action(draw(maybe_color), draw(st.sampled_from([STAY, HALF, OTHER]))),
        )
        for _ in range(n_rules)
    ]
    # keep it total so validation cannot reject the round-tripped spec
    rules.append(Rule(Guard(), Action(None, STAY)))
    return AlgorithmSpec(name=draw(st.sampled_from(["a", "b2", "X_y"])),
                         colors=colors, rules=tuple(rules))


@given(random_spec())
def test_random_specs_round_trip(spec):
    result = parse_algorithm(render_algorithm(spec))
    assert result.ok
    assert result.spec == spec
