"""Core state model: configurations, robot state, and atomic event semantics.

Two robots (A and B) live on a line abstracted to a relative distance with two
reachable values, SAME and NEAR (a third value, FAR, exists only for the
non-rigid exploration mode).  Each robot carries a visible color and works
through a strict four-event cycle LOOK -> COMPUTE -> BEGMOVE -> ENDMOVE:

  * LOOK      snapshots the world and runs the algorithm, storing a pending
              move and a pending color,
  * COMPUTE   commits the pending color to the visible light,
  * BEGMOVE   starts the motion (the robot's position becomes undefined to
              the other robot until the motion ends),
  * ENDMOVE   resolves the motion against the other robot's pending move and
              updates the distance.

All state values are immutable; every event is a pure function
Configuration -> Configuration.  Enum members are stable small integers so
that the array-based exploration engine can share the numbering.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from enum import IntEnum
from typing import List, NamedTuple, Optional, Tuple


class Color(IntEnum):
    """Light colors; an algorithm with N colors uses the first N, N <= 5."""

    BLACK = 0
    WHITE = 1
    RED = 2
    YELLOW = 3
    GREEN = 4


class Distance(IntEnum):
    """Relative position of the pair.  FAR exists only in non-rigid mode."""

    SAME = 0
    NEAR = 1
    FAR = 2


class Move(IntEnum):
    """Pending moves.  NONE means nothing computed yet; MISS is a motion
    guaranteed not to reach the other robot (stale target)."""

    STAY = 0
    TO_HALF = 1
    TO_OTHER = 2
    MISS = 3
    NONE = 4


class Phase(IntEnum):
    """The NEXT event this robot will execute.  LOOK doubles as the idle
    (wait) state between cycles."""

    LOOK = 0
    COMPUTE = 1
    BEGMOVE = 2
    ENDMOVE = 3


class LightModel(IntEnum):
    FULL = 0      # a robot sees its own color and the other's
    EXTERNAL = 1  # a robot sees only the other's color


ROBOT_A = 0
ROBOT_B = 1
ROBOT_NAMES = ("A", "B")

# moves an algorithm may output (MISS and NONE are bookkeeping values)
ALGORITHM_MOVES = (Move.STAY, Move.TO_HALF, Move.TO_OTHER)


class InvariantError(Exception):
    """A structural invariant or event precondition was broken.

    Raised for states or event applications that no valid exploration can
    produce; seeing one means a bug in the caller, not adversary behavior.
    """


class Observation(NamedTuple):
    """What a robot sees at LOOK time."""

    my_color: Color
    other_color: Color
    gathered: bool
    other_moving: bool


class Command(NamedTuple):
    """What the algorithm returns: a concrete new color and a motion."""

    new_color: Color
    move: Move


class FairRun(NamedTuple):
    """Bounded-fairness bookkeeping: who acted last and for how many
    consecutive blocks.  (None, 0) before any activation."""

    last_active: Optional[int]
    streak: int


@dataclass(frozen=True)
class RobotState:
    """One robot: visible color, next event, and pending command.

    Invariants (checked on construction):
      * pending_move is NONE exactly when phase is LOOK,
      * pending_color is present exactly when phase is COMPUTE
        (the color commits at COMPUTE and the slot empties).
    """

    color: Color
    phase: Phase = Phase.LOOK
    pending_move: Move = Move.NONE
    pending_color: Optional[Color] = None

    def __post_init__(self) -> None:
        if (self.pending_move is Move.NONE) != (self.phase is Phase.LOOK):
            raise InvariantError(
                f"pending_move {self.pending_move.name} inconsistent with "
                f"phase {self.phase.name}"
            )
        if (self.pending_color is not None) != (self.phase is Phase.COMPUTE):
            raise InvariantError(
                f"pending_color {self.pending_color} inconsistent with "
                f"phase {self.phase.name}"
            )

    @property
    def is_moving(self) -> bool:
        # true only while the motion is in flight (between BEGMOVE and ENDMOVE)
        return self.phase is Phase.ENDMOVE and self.pending_move not in (
            Move.STAY,
            Move.NONE,
        )

    @classmethod
    def idle(cls, color: Color) -> "RobotState":
        return cls(color=color)


@dataclass(frozen=True)
class Configuration:
    """Global model state: distance, both robots, fairness bookkeeping."""

    distance: Distance
    robots: Tuple[RobotState, RobotState]
    fair_run: FairRun = FairRun(None, 0)

    def robot(self, index: int) -> RobotState:
        return self.robots[index]

    def with_robot(self, index: int, state: RobotState) -> "Configuration":
        robots = list(self.robots)
        robots[index] = state
        return replace(self, robots=(robots[0], robots[1]))

    @property
    def is_simple(self) -> bool:
        """Both robots idle with no pending state."""
        return all(r.phase is Phase.LOOK for r in self.robots)


def simple_configuration(
    distance: Distance,
    color_a: Color,
    color_b: Color,
) -> Configuration:
    return Configuration(
        distance=distance,
        robots=(RobotState.idle(color_a), RobotState.idle(color_b)),
    )


# ---------------------------------------------------------------------------
# Atomic events
# ---------------------------------------------------------------------------


def observe(
    config: Configuration, me: int, light_model: LightModel = LightModel.FULL
) -> Observation:
    """Snapshot taken at LOOK time.

    The other robot's committed color is visible, never its pending color.
    A robot whose motion is in flight has no defined position, so the pair
    does not count as gathered while the other robot moves.  The light model
    does not change the snapshot contents: my_color is always tracked, and
    EXTERNAL algorithms are barred from reading it by rule validation.
    """
    mine = config.robots[me]
    if mine.phase is not Phase.LOOK:
        raise InvariantError(f"observe outside LOOK (phase {mine.phase.name})")
    other = config.robots[1 - me]
    other_moving = other.is_moving
    gathered = config.distance is Distance.SAME and not other_moving
    return Observation(
        my_color=mine.color,
        other_color=other.color,
        gathered=gathered,
        other_moving=other_moving,
    )


def stationarize(move: Move, gathered: bool) -> Move:
    """A motion computed while already gathered goes nowhere: both the
    midpoint and the other robot's position are the robot's own position,
    so the move collapses to STAY."""
    if gathered and move in (Move.TO_HALF, Move.TO_OTHER):
        return Move.STAY
    return move


def apply_look(config: Configuration, me: int, algo) -> Configuration:
    """Observe, run the algorithm, store the pending command.

    The computed move is stationarized, then demoted to MISS when the other
    robot was seen moving (its position was undefined, so the target is
    stale and the motion cannot reach it).  A computed STAY survives: a
    stationary robot cannot miss.
    """
    obs = observe(config, me, algo.light_model)
    command = algo.evaluate(obs)
    move = stationarize(command.move, obs.gathered)
    if obs.other_moving and move in (Move.TO_HALF, Move.TO_OTHER):
        move = Move.MISS
    new_me = RobotState(
        color=config.robots[me].color,
        phase=Phase.COMPUTE,
        pending_move=move,
        pending_color=command.new_color,
    )
    return config.with_robot(me, new_me)


def apply_compute(config: Configuration, me: int) -> Configuration:
    """Commit the pending color to the visible light."""
    mine = config.robots[me]
    if mine.phase is not Phase.COMPUTE:
        raise InvariantError(f"compute outside COMPUTE (phase {mine.phase.name})")
    if mine.pending_color is None:
        raise InvariantError("no pending color at COMPUTE")
    new_me = RobotState(
        color=mine.pending_color,
        phase=Phase.BEGMOVE,
        pending_move=mine.pending_move,
        pending_color=None,
    )
    return config.with_robot(me, new_me)


def apply_begmove(config: Configuration, me: int) -> Configuration:
    """Start the motion; the robot is in flight until ENDMOVE unless the
    pending move is STAY."""
    mine = config.robots[me]
    if mine.phase is not Phase.BEGMOVE:
        raise InvariantError(f"begmove outside BEGMOVE (phase {mine.phase.name})")
    new_me = RobotState(
        color=mine.color,
        phase=Phase.ENDMOVE,
        pending_move=mine.pending_move,
        pending_color=None,
    )
    return config.with_robot(me, new_me)


def _resolve_rigid(
    distance: Distance, mine: Move, other: Move
) -> Tuple[Distance, Move]:
    """Movement resolution for a completed motion, first match wins.

    Returns (new distance, possibly rewritten pending move of the other
    robot).  'passive' means the other robot is not going anywhere (STAY
    pending, or nothing computed yet).  Precedence, top to bottom:

      1. STAY moves change nothing.
      2. A MISS lands short of the other robot: distance becomes NEAR; if
         the other robot has its own motion pending toward my old position,
         that target is now stale, so it becomes a MISS too.
      3. Reaching the other robot (TO_OTHER) makes the distance SAME when it
         is passive, or when we already were at SAME; completing it from
         NEAR against a moving other robot still lands at the other's old
         position (SAME) but turns the other's motion stale (MISS).
      4. A half-way move keeps the distance value; two simultaneous half
         moves aim at the same midpoint, so the later one now needs only the
         other half (its pending becomes TO_OTHER); against any other active
         pending the other robot's target goes stale (MISS).
    """
    passive = other in (Move.STAY, Move.NONE)
    if mine is Move.STAY:
        return distance, other
    if mine is Move.MISS:
        if passive:
            return Distance.NEAR, other
        return Distance.NEAR, Move.MISS
    if mine is Move.TO_OTHER:
        if passive:
            return Distance.SAME, other
        if distance is Distance.SAME:
            return Distance.SAME, other
        return Distance.SAME, Move.MISS
    if mine is Move.TO_HALF:
        if other is Move.TO_HALF:
            return distance, Move.TO_OTHER
        if passive:
            return distance, other
        return distance, Move.MISS
    raise InvariantError("pending move NONE at ENDMOVE")


def _with_pending(state: RobotState, pending: Move) -> RobotState:
    if state.pending_move is pending:
        return state
    return replace(state, pending_move=pending)


def resolve_move(config: Configuration, me: int) -> Configuration:
    """Finish the motion: apply the resolution rules, clear the pending
    command, return to the idle phase.  Rigid distances only; FAR
    resolutions branch and live in far_resolution_outcomes."""
    mine = config.robots[me]
    if mine.phase is not Phase.ENDMOVE:
        raise InvariantError(f"endmove outside ENDMOVE (phase {mine.phase.name})")
    if config.distance is Distance.FAR:
        raise InvariantError("rigid resolution applied at distance FAR")
    other = config.robots[1 - me]
    new_distance, new_other_pending = _resolve_rigid(
        config.distance, mine.pending_move, other.pending_move
    )
    new_me = RobotState(color=mine.color, phase=Phase.LOOK)
    return Configuration(
        distance=new_distance,
        robots=(
            (new_me, _with_pending(other, new_other_pending))
            if me == ROBOT_A
            else (_with_pending(other, new_other_pending), new_me)
        ),
        fair_run=config.fair_run,
    )


def far_resolution_outcomes(
    config: Configuration, me: int, counter: int,
    counter_bound: Optional[int] = None,
) -> List[Tuple[Configuration, int]]:
    """Non-rigid resolution of a completed motion at distance FAR.

    A STAY changes nothing.  Any real motion (TO_HALF, TO_OTHER, MISS) made
    at least the guaranteed minimum progress toward a target computed from a
    stale FAR snapshot, so the outcome branches: (a) the pair becomes NEAR,
    or (b) the scheduler cut the move short and the pair stays FAR.  In both
    branches the other robot's own pending motion (if any) aimed at a
    position that is now off by at least the minimum progress, so it is
    rewritten to MISS.  The exact meeting point is never guaranteed from
    FAR, so no branch yields SAME.

    `counter` counts interruptions taken so far: branch (a) carries it
    unchanged, branch (b) increments it.  A counter_bound of None leaves
    branch (b) always available; an integer bound suppresses it once the
    counter reaches the bound (0 disables interruptions entirely).
    Outcomes list the NEAR branch first.
    """
    mine = config.robots[me]
    if mine.phase is not Phase.ENDMOVE:
        raise InvariantError(f"endmove outside ENDMOVE (phase {mine.phase.name})")
    if config.distance is not Distance.FAR:
        raise InvariantError("far resolution applied at rigid distance")
    other = config.robots[1 - me]
    new_me = RobotState(color=mine.color, phase=Phase.LOOK)
    if mine.pending_move is Move.STAY:
        return [(config.with_robot(me, new_me), counter)]
    if mine.pending_move is Move.NONE:
        raise InvariantError("pending move NONE at ENDMOVE")
    if other.pending_move in (Move.STAY, Move.NONE):
        new_other = other
    else:
        new_other = _with_pending(other, Move.MISS)
    robots = (
        (new_me, new_other) if me == ROBOT_A else (new_other, new_me)
    )
    outcomes = [
        (
            Configuration(Distance.NEAR, robots, config.fair_run),
            counter,
        )
    ]
    if counter_bound is None or counter < counter_bound:
        outcomes.append(
            (
                Configuration(Distance.FAR, robots, config.fair_run),
                counter + 1,
            )
        )
    return outcomes


def apply_event(config: Configuration, me: int, algo) -> Configuration:
    """Run the robot's next event (selected by its phase).  Rigid distances
    only; non-rigid exploration drives the FAR branching itself."""
    phase = config.robots[me].phase
    if phase is Phase.LOOK:
        return apply_look(config, me, algo)
    if phase is Phase.COMPUTE:
        return apply_compute(config, me)
    if phase is Phase.BEGMOVE:
        return apply_begmove(config, me)
    return resolve_move(config, me)
