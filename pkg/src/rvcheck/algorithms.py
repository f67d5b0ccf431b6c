"""Algorithm representation: guarded rules, a small text format, built-ins.

An algorithm is an ordered list of guarded rules.  A guard matches the
observed color pair (own color, other robot's color), either exactly or via
wildcards, or matches the "gathered" predicate; the first matching rule wins.
The action names the new light color (or keeps the current one) and one of
the three motions a robot may take: STAY, TO_HALF (move to the midpoint), or
TO_OTHER (move to the other robot's position).

The text format mirrors the rule tables one line per rule so files can be
eyeballed against their published forms:

    algorithm Vig2Cols
    colors BLACK WHITE
    lights full
    init all-pairs
    rule (BLACK, BLACK) -> WHITE, STAY
    rule (BLACK, WHITE) -> skip
    rule (WHITE, BLACK) -> -, OTHER
    rule (WHITE, WHITE) -> BLACK, HALF

"skip" keeps both color and position, "-" keeps the color, "*" is a color
wildcard, and "rule gathered -> ..." guards on the gathered predicate.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field, replace
from enum import IntEnum
from functools import lru_cache
from typing import Dict, List, Optional, Tuple

from .model import ALGORITHM_MOVES, Color, Command, LightModel, Move, Observation


class Rigidity(IntEnum):
    """Metadata: which starting assumptions the algorithm needs."""

    SELF_STABILIZING = 0
    QUASI_SS = 1          # needs identical starting colors
    NON_SS = 2            # needs one specific starting color


class InitKind(IntEnum):
    ALL_PAIRS = 0         # every ordered color pair
    IDENTICAL_PAIRS = 1   # both robots share a color, all choices
    FIXED = 2             # one specific color for both


@dataclass(frozen=True)
class InitRegime:
    kind: InitKind
    color: Optional[Color] = None

    def __post_init__(self) -> None:
        if (self.kind is InitKind.FIXED) != (self.color is not None):
            raise ValueError("FIXED init takes a color, the others do not")

    @classmethod
    def all_pairs(cls) -> "InitRegime":
        return cls(InitKind.ALL_PAIRS)

    @classmethod
    def identical_pairs(cls) -> "InitRegime":
        return cls(InitKind.IDENTICAL_PAIRS)

    @classmethod
    def fixed(cls, color: Color) -> "InitRegime":
        return cls(InitKind.FIXED, color)


@dataclass(frozen=True)
class Guard:
    """Color-pair guard; None is a wildcard.  A gathered_only guard ignores
    the color fields and matches exactly the gathered observations."""

    me_color: Optional[Color] = None
    other_color: Optional[Color] = None
    gathered_only: bool = False

    def matches(self, obs: Observation) -> bool:
        if self.gathered_only:
            return obs.gathered
        if self.me_color is not None and obs.my_color is not self.me_color:
            return False
        if self.other_color is not None and obs.other_color is not self.other_color:
            return False
        return True

    def describe(self) -> str:
        if self.gathered_only:
            return "gathered"
        me = self.me_color.name if self.me_color is not None else "*"
        other = self.other_color.name if self.other_color is not None else "*"
        return f"({me}, {other})"


@dataclass(frozen=True)
class Action:
    """New color (None keeps the current one) plus a motion."""

    new_color: Optional[Color] = None
    move: Move = Move.STAY


@dataclass(frozen=True)
class Rule:
    guard: Guard
    action: Action


class EvaluationError(Exception):
    """No rule matched an observation; impossible for validated specs."""


@dataclass(frozen=True)
class AlgorithmSpec:
    """A named, ordered rule table plus its operating assumptions."""

    name: str
    colors: Tuple[Color, ...]
    rules: Tuple[Rule, ...]
    light_model: LightModel = LightModel.FULL
    init_regime: InitRegime = field(default_factory=InitRegime.all_pairs)
    rigidity: Rigidity = Rigidity.SELF_STABILIZING

    @property
    def n_colors(self) -> int:
        return len(self.colors)

    def evaluate(self, obs: Observation) -> Command:
        """First matching rule wins; a kept color resolves to the observed
        own color."""
        for rule in self.rules:
            if rule.guard.matches(obs):
                new_color = rule.action.new_color
                if new_color is None:
                    new_color = obs.my_color
                return Command(new_color=new_color, move=rule.action.move)
        raise EvaluationError(
            f"{self.name}: no rule matches "
            f"({obs.my_color.name}, {obs.other_color.name}, "
            f"gathered={obs.gathered})"
        )

    def with_init_regime(self, regime: InitRegime) -> "AlgorithmSpec":
        return replace(self, init_regime=regime)


@dataclass(frozen=True)
class Diagnostic:
    """A parse or validation finding with a 1-based source position.
    Position (0, 0) marks findings about the whole file."""

    line: int
    col: int
    severity: str  # "error" or "warning"
    message: str

    def __str__(self) -> str:
        where = f"line {self.line}" if self.line else "spec"
        return f"{where}: {self.severity}: {self.message}"


@dataclass
class ParseResult:
    spec: Optional[AlgorithmSpec]
    diagnostics: List[Diagnostic]

    @property
    def ok(self) -> bool:
        return self.spec is not None

    def errors(self) -> List[Diagnostic]:
        return [d for d in self.diagnostics if d.severity == "error"]


# ---------------------------------------------------------------------------
# Parsing
# ---------------------------------------------------------------------------

_RULE_RE = re.compile(r"rule\s+(.*)$")
_GUARD_PAIR_RE = re.compile(r"\(\s*([A-Za-z*]+)\s*,\s*([A-Za-z*]+)\s*\)$")

_MOVE_NAMES = {
    "STAY": Move.STAY,
    "HALF": Move.TO_HALF,
    "OTHER": Move.TO_OTHER,
}

_LIGHT_NAMES = {"full": LightModel.FULL, "external": LightModel.EXTERNAL}

_RIGIDITY_NAMES = {
    "self-stabilizing": Rigidity.SELF_STABILIZING,
    "quasi-self-stabilizing": Rigidity.QUASI_SS,
    "non-self-stabilizing": Rigidity.NON_SS,
}


def _color_by_name(token: str) -> Optional[Color]:
    try:
        return Color[token.upper()]
    except KeyError:
        return None


class _Parser:
    def __init__(self, text: str) -> None:
        self.text = text
        self.diagnostics: List[Diagnostic] = []
        self.name: Optional[str] = None
        self.colors: Optional[Tuple[Color, ...]] = None
        self.light_model = LightModel.FULL
        self.init_regime = InitRegime.all_pairs()
        self.rigidity = Rigidity.SELF_STABILIZING
        self.rules: List[Tuple[int, Rule]] = []
        self.seen_headers: set = set()

    def error(self, line_no: int, col: int, message: str) -> None:
        self.diagnostics.append(Diagnostic(line_no, col, "error", message))

    def warn(self, line_no: int, col: int, message: str) -> None:
        self.diagnostics.append(Diagnostic(line_no, col, "warning", message))

    def run(self) -> ParseResult:
        for line_no, raw in enumerate(self.text.splitlines(), start=1):
            line = raw.split("#", 1)[0].rstrip()
            if not line.strip():
                continue
            stripped = line.strip()
            col = raw.index(stripped[0]) + 1
            keyword = stripped.split(None, 1)[0]
            rest = stripped[len(keyword):].strip()
            if keyword == "algorithm":
                self.header(line_no, col, keyword)
                self.name = rest or None
                if not rest:
                    self.error(line_no, col, "algorithm header needs a name")
            elif keyword == "colors":
                self.header(line_no, col, keyword)
                self.parse_colors(line_no, col, rest)
            elif keyword == "lights":
                self.header(line_no, col, keyword)
                if rest.lower() in _LIGHT_NAMES:
                    self.light_model = _LIGHT_NAMES[rest.lower()]
                else:
                    self.error(line_no, col, f"unknown light model '{rest}'")
            elif keyword == "init":
                self.header(line_no, col, keyword)
                self.parse_init(line_no, col, rest)
            elif keyword == "rigidity":
                self.header(line_no, col, keyword)
                if rest.lower() in _RIGIDITY_NAMES:
                    self.rigidity = _RIGIDITY_NAMES[rest.lower()]
                else:
                    self.error(line_no, col, f"unknown rigidity '{rest}'")
            elif keyword == "rule":
                self.parse_rule(line_no, col, rest)
            else:
                self.error(line_no, col, f"unknown keyword '{keyword}'")

        if self.name is None and "algorithm" not in self.seen_headers:
            self.error(0, 0, "missing 'algorithm' header")
        if self.colors is None:
            if "colors" not in self.seen_headers:
                self.error(0, 0, "missing 'colors' header")
        if not self.rules:
            self.error(0, 0, "no rules given")
        self.check_reachability()

        if any(d.severity == "error" for d in self.diagnostics):
            return ParseResult(None, self.diagnostics)
        spec = AlgorithmSpec(
            name=self.name or "unnamed",
            colors=self.colors or (Color.BLACK,),
            rules=tuple(rule for _, rule in self.rules),
            light_model=self.light_model,
            init_regime=self.init_regime,
            rigidity=self.rigidity,
        )
        return ParseResult(spec, self.diagnostics)

    def header(self, line_no: int, col: int, keyword: str) -> None:
        if keyword in self.seen_headers:
            self.error(line_no, col, f"duplicate '{keyword}' header")
        self.seen_headers.add(keyword)

    def parse_colors(self, line_no: int, col: int, rest: str) -> None:
        colors: List[Color] = []
        for token in rest.split():
            color = _color_by_name(token)
            if color is None:
                self.error(line_no, col, f"unknown color '{token}'")
                return
            if color in colors:
                self.error(line_no, col, f"color {color.name} listed twice")
                return
            colors.append(color)
        if not colors:
            self.error(line_no, col, "colors header needs at least one color")
            return
        self.colors = tuple(colors)

    def parse_init(self, line_no: int, col: int, rest: str) -> None:
        tokens = rest.split()
        kind = tokens[0].lower() if tokens else ""
        if kind == "all-pairs":
            self.init_regime = InitRegime.all_pairs()
        elif kind == "identical-pairs":
            self.init_regime = InitRegime.identical_pairs()
        elif kind == "fixed" and len(tokens) == 2:
            color = _color_by_name(tokens[1])
            if color is None:
                self.error(line_no, col, f"unknown color '{tokens[1]}'")
                return
            self.init_regime = InitRegime.fixed(color)
        else:
            self.error(line_no, col, f"unknown init regime '{rest}'")

    def rule_color(self, line_no: int, col: int, token: str) -> Optional[Color]:
        """A color token inside a rule; must be declared.  Returns None for
        errors AND for the wildcard, so callers check the token first."""
        color = _color_by_name(token)
        if color is None:
            self.error(line_no, col, f"unknown color '{token}'")
            return None
        if self.colors is not None and color not in self.colors:
            self.error(line_no, col, f"undeclared color {color.name}")
            return None
        return color

    def parse_rule(self, line_no: int, col: int, rest: str) -> None:
        if self.colors is None:
            self.error(line_no, col, "rules must come after the colors header")
            return
        parts = rest.split("->")
        if len(parts) != 2:
            self.error(line_no, col, "rule needs exactly one '->'")
            return
        guard_text, action_text = parts[0].strip(), parts[1].strip()

        if guard_text == "gathered":
            guard = Guard(gathered_only=True)
        else:
            match = _GUARD_PAIR_RE.match(guard_text)
            if not match:
                self.error(
                    line_no, col,
                    f"guard must be '(ME, OTHER)' or 'gathered', got '{guard_text}'",
                )
                return
            me_token, other_token = match.group(1), match.group(2)
            me_color = other_color = None
            if me_token != "*":
                me_color = self.rule_color(line_no, col, me_token)
                if me_color is None:
                    return
            if other_token != "*":
                other_color = self.rule_color(line_no, col, other_token)
                if other_color is None:
                    return
            guard = Guard(me_color=me_color, other_color=other_color)

        if action_text == "skip":
            action = Action(new_color=None, move=Move.STAY)
        else:
            pieces = [p.strip() for p in action_text.split(",")]
            if len(pieces) != 2:
                self.error(
                    line_no, col,
                    f"action must be 'NEWCOLOR, MOVE' or 'skip', got '{action_text}'",
                )
                return
            color_token, move_token = pieces
            if color_token in ("-", "--"):
                new_color = None
            else:
                new_color = self.rule_color(line_no, col, color_token)
                if new_color is None:
                    return
            move = _MOVE_NAMES.get(move_token.upper())
            if move is None:
                self.error(
                    line_no, col,
                    f"unknown move '{move_token}' (one of STAY, HALF, OTHER)",
                )
                return
            action = Action(new_color=new_color, move=move)

        for seen_line, seen in self.rules:
            if seen.guard == guard:
                self.warn(
                    line_no, col,
                    f"guard {guard.describe()} duplicates line {seen_line}",
                )
                break
        self.rules.append((line_no, Rule(guard, action)))

    def check_reachability(self) -> None:
        catch_all_line: Optional[int] = None
        for line_no, rule in self.rules:
            if catch_all_line is not None:
                self.warn(
                    line_no, 1,
                    f"rule is unreachable (catch-all on line {catch_all_line})",
                )
                continue
            guard = rule.guard
            if (
                not guard.gathered_only
                and guard.me_color is None
                and guard.other_color is None
            ):
                catch_all_line = line_no


def parse_algorithm(text: str) -> ParseResult:
    """Parse the text format into an AlgorithmSpec, collecting diagnostics
    with positions.  The result carries one exactly when no error was
    found."""
    return _Parser(text).run()


def load_algorithm_file(path: str) -> ParseResult:
    with open(path, "r", encoding="utf-8") as handle:
        return parse_algorithm(handle.read())


def render_algorithm(spec: AlgorithmSpec) -> str:
    """Canonical text for a spec; parsing it back yields an equal spec."""
    lines = [
        f"algorithm {spec.name}",
        "colors " + " ".join(c.name for c in spec.colors),
        f"lights {'external' if spec.light_model is LightModel.EXTERNAL else 'full'}",
    ]
    regime = spec.init_regime
    if regime.kind is InitKind.ALL_PAIRS:
        lines.append("init all-pairs")
    elif regime.kind is InitKind.IDENTICAL_PAIRS:
        lines.append("init identical-pairs")
    else:
        lines.append(f"init fixed {regime.color.name}")
    rigidity_name = {v: k for k, v in _RIGIDITY_NAMES.items()}[spec.rigidity]
    lines.append(f"rigidity {rigidity_name}")
    move_names = {v: k for k, v in _MOVE_NAMES.items()}
    for rule in spec.rules:
        if rule.action.new_color is None and rule.action.move is Move.STAY:
            action = "skip"
        else:
            color = (
                rule.action.new_color.name
                if rule.action.new_color is not None
                else "-"
            )
            action = f"{color}, {move_names[rule.action.move]}"
        lines.append(f"rule {rule.guard.describe()} -> {action}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Validation
# ---------------------------------------------------------------------------


def validate_spec(spec: AlgorithmSpec) -> List[Diagnostic]:
    """Semantic checks beyond syntax: exhaustive guards, legal moves,
    external-light discipline, declared colors only.  Empty result means the
    spec is safe to explore."""
    diags: List[Diagnostic] = []

    if not 1 <= spec.n_colors <= 5:
        diags.append(
            Diagnostic(0, 0, "error", f"{spec.n_colors} colors (1 to 5 allowed)")
        )
    if len(set(spec.colors)) != len(spec.colors):
        diags.append(Diagnostic(0, 0, "error", "duplicate declared colors"))

    declared = set(spec.colors)
    for index, rule in enumerate(spec.rules):
        where = f"rule {index + 1} {rule.guard.describe()}"
        for label, color in (
            ("guard own color", rule.guard.me_color),
            ("guard other color", rule.guard.other_color),
            ("new color", rule.action.new_color),
        ):
            if color is not None and color not in declared:
                diags.append(
                    Diagnostic(0, 0, "error", f"{where}: {label} {color.name} undeclared")
                )
        if rule.action.move not in ALGORITHM_MOVES:
            diags.append(
                Diagnostic(
                    0, 0, "error",
                    f"{where}: move {rule.action.move.name} not allowed "
                    "(STAY, TO_HALF, TO_OTHER only)",
                )
            )
        if (
            spec.light_model is LightModel.EXTERNAL
            and not rule.guard.gathered_only
            and rule.guard.me_color is not None
        ):
            diags.append(
                Diagnostic(
                    0, 0, "error",
                    f"{where}: external-light rules cannot read the own color",
                )
            )

    regime = spec.init_regime
    if regime.kind is InitKind.FIXED and regime.color not in declared:
        diags.append(
            Diagnostic(0, 0, "error", f"init color {regime.color.name} undeclared")
        )

    for me in spec.colors:
        for other in spec.colors:
            for gathered in (False, True):
                obs = Observation(me, other, gathered, False)
                if not any(rule.guard.matches(obs) for rule in spec.rules):
                    diags.append(
                        Diagnostic(
                            0, 0, "error",
                            f"no rule matches ({me.name}, {other.name}, "
                            f"gathered={gathered})",
                        )
                    )
    return diags


# ---------------------------------------------------------------------------
# Identical color condition
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class IccResult:
    """Outcome of the static identical-color-condition check."""

    satisfied: bool
    witnesses: Tuple[Tuple[Color, Color], ...] = ()


def check_icc(spec: AlgorithmSpec) -> IccResult:
    """An algorithm satisfies the identical color condition when it changes
    its color only on observations where both colors are equal.  Scans every
    observation over the declared colors; witnesses are the offending color
    pairs."""
    witnesses: List[Tuple[Color, Color]] = []
    for me in spec.colors:
        for other in spec.colors:
            for gathered, moving in ((False, False), (False, True), (True, False)):
                obs = Observation(me, other, gathered, moving)
                command = spec.evaluate(obs)
                if command.new_color is not me and me is not other:
                    if (me, other) not in witnesses:
                        witnesses.append((me, other))
    return IccResult(satisfied=not witnesses, witnesses=tuple(witnesses))


# ---------------------------------------------------------------------------
# Built-in algorithms
# ---------------------------------------------------------------------------

_BUILTIN_SOURCES: Dict[str, str] = {
    "NoMove": """
        algorithm NoMove
        colors BLACK
        rule (*, *) -> -, STAY
    """,
    "ToHalf": """
        algorithm ToHalf
        colors BLACK
        rule (*, *) -> -, HALF
    """,
    "ToOther": """
        algorithm ToOther
        colors BLACK
        rule (*, *) -> -, OTHER
    """,
    "Vig2Cols": """
        algorithm Vig2Cols
        colors BLACK WHITE
        rule (BLACK, BLACK) -> WHITE, STAY
        rule (BLACK, WHITE) -> skip
        rule (WHITE, BLACK) -> -, OTHER
        rule (WHITE, WHITE) -> BLACK, HALF
    """,
    "Vig3Cols": """
        algorithm Vig3Cols
        colors BLACK WHITE RED
        rule (BLACK, BLACK) -> WHITE, HALF
        rule (BLACK, WHITE) -> -, OTHER
        rule (BLACK, RED) -> skip
        rule (WHITE, BLACK) -> skip
        rule (WHITE, WHITE) -> RED, STAY
        rule (WHITE, RED) -> -, OTHER
        rule (RED, BLACK) -> -, OTHER
        rule (RED, WHITE) -> skip
        rule (RED, RED) -> BLACK, STAY
    """,
    "Her2Cols": """
        algorithm Her2Cols
        colors BLACK WHITE
        rule (BLACK, BLACK) -> WHITE, STAY
        rule (BLACK, WHITE) -> skip
        rule gathered -> skip
        rule (WHITE, BLACK) -> -, OTHER
        rule (WHITE, WHITE) -> BLACK, HALF
    """,
    "Flo3ColsX": """
        algorithm Flo3ColsX
        colors BLACK WHITE RED
        lights external
        rule (*, BLACK) -> WHITE, HALF
        rule (*, WHITE) -> RED, STAY
        rule (*, RED) -> BLACK, OTHER
    """,
    "Oku5ColsX": """
        algorithm Oku5ColsX
        colors BLACK WHITE RED YELLOW GREEN
        lights external
        rule (*, BLACK) -> WHITE, HALF
        rule (*, WHITE) -> RED, STAY
        rule (*, RED) -> YELLOW, OTHER
        rule (*, YELLOW) -> GREEN, STAY
        rule (*, GREEN) -> BLACK, STAY
    """,
    "Oku4ColsX": """
        algorithm Oku4ColsX
        colors BLACK WHITE RED YELLOW
        lights external
        rule (*, BLACK) -> WHITE, HALF
        rule (*, WHITE) -> RED, STAY
        rule (*, RED) -> YELLOW, OTHER
        rule (*, YELLOW) -> BLACK, STAY
    """,
    "Oku3ColsX": """
        algorithm Oku3ColsX
        colors BLACK WHITE RED
        lights external
        rule (*, BLACK) -> WHITE, HALF
        rule (*, WHITE) -> RED, STAY
        rule (*, RED) -> WHITE, OTHER
    """,
    "Oku4ColsQSS": """
        algorithm Oku4ColsQSS
        colors BLACK WHITE RED YELLOW
        lights external
        init identical-pairs
        rigidity quasi-self-stabilizing
        rule (*, BLACK) -> WHITE, HALF
        rule (*, WHITE) -> RED, STAY
        rule (*, RED) -> YELLOW, OTHER
        rule (*, YELLOW) -> BLACK, STAY
    """,
    "Oku3ColsNSS": """
        algorithm Oku3ColsNSS
        colors BLACK WHITE RED
        lights external
        init fixed BLACK
        rigidity non-self-stabilizing
        rule (*, BLACK) -> WHITE, HALF
        rule (*, WHITE) -> RED, STAY
        rule (*, RED) -> WHITE, OTHER
    """,
}

_BUILTIN_LOOKUP = {name.lower(): name for name in _BUILTIN_SOURCES}

BUILTIN_NAMES: Tuple[str, ...] = tuple(_BUILTIN_SOURCES)


class UnknownAlgorithmError(Exception):
    pass


@lru_cache(maxsize=None)
def builtin(name: str) -> AlgorithmSpec:
    """Look up a built-in algorithm by (case-insensitive) name."""
    canonical = _BUILTIN_LOOKUP.get(name.lower())
    if canonical is None:
        known = ", ".join(BUILTIN_NAMES)
        raise UnknownAlgorithmError(f"unknown algorithm '{name}' (known: {known})")
    source = _BUILTIN_SOURCES[canonical]
    text = "\n".join(line.strip() for line in source.strip().splitlines())
    result = parse_algorithm(text)
    assert result.spec is not None, result.diagnostics
    problems = validate_spec(result.spec)
    assert not problems, problems
    return result.spec
