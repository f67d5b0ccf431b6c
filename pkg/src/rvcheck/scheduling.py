"""Scheduler models: which event blocks the adversary may fire next.

A scheduler picks, at every step, one robot and a contiguous run of its event
cycle to execute atomically (no interleaving inside a block), or the fully
synchronous round that advances both robots through a whole cycle together.
Six models differ only in the blocks they offer:

  * CENTRALIZED  one robot runs a full LOOK..ENDMOVE cycle at a time,
  * FSYNC        both robots run a cycle in lockstep (one composite round),
  * SSYNC        per step, either a centralized block or the full round,
  * ASYNC        single events, freely interleaved,
  * ASYNC_LC     like ASYNC but LOOK and COMPUTE fuse into one block,
  * ASYNC_MOVE   like ASYNC but BEGMOVE and ENDMOVE fuse into one block.

Starvation is bounded: a robot that has run `bound` consecutive blocks while
the other robot had something to do loses its blocks until the other moves.
The bookkeeping lives in the configuration (fair_run), which keeps the
transition relation memoryless.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from enum import IntEnum
from typing import List, Optional, Tuple

from .model import (
    Configuration,
    Distance,
    FairRun,
    InvariantError,
    Phase,
    ROBOT_A,
    ROBOT_B,
    ROBOT_NAMES,
    apply_event,
    far_resolution_outcomes,
)


class SchedulerKind(IntEnum):
    CENTRALIZED = 0
    FSYNC = 1
    SSYNC = 2
    ASYNC = 3
    ASYNC_LC = 4
    ASYNC_MOVE = 5


SCHEDULER_NAMES = {
    "centralized": SchedulerKind.CENTRALIZED,
    "fsync": SchedulerKind.FSYNC,
    "ssync": SchedulerKind.SSYNC,
    "async": SchedulerKind.ASYNC,
    "async-lc": SchedulerKind.ASYNC_LC,
    "async-move": SchedulerKind.ASYNC_MOVE,
}


def default_fairness_bound(n_colors: int) -> int:
    # 8N consecutive activations: enough for both robots to walk all N colors
    # through full cycles across both distance values
    return 8 * n_colors


@dataclass(frozen=True)
class EventBlock:
    """One scheduler step: a robot plus a contiguous run of its event cycle,
    (robot None, no events) for the fully synchronous round, or (robot None,
    events from LOOK) for both robots running those events simultaneously.

    A simultaneous block interleaves as both looks first, so each robot
    observes the state from before the block.  Sequencing one robot's block
    after the other's cannot show that behavior: the later look would already
    see the earlier robot's committed color."""

    robot: Optional[int]
    events: Tuple[Phase, ...] = ()

    def __post_init__(self) -> None:
        if self.robot is None:
            if self.events and self.events[0] is not Phase.LOOK:
                raise InvariantError("a simultaneous block starts at LOOK")
        elif self.robot not in (ROBOT_A, ROBOT_B):
            raise InvariantError(f"no such robot index {self.robot}")
        elif not self.events:
            raise InvariantError("robot block needs at least one event")
        for first, second in zip(self.events, self.events[1:]):
            if second is not Phase((first + 1) % 4):
                raise InvariantError(
                    f"events {first.name}, {second.name} not consecutive"
                )

    @property
    def is_round(self) -> bool:
        return self.robot is None and not self.events

    @property
    def is_joint(self) -> bool:
        return self.robot is None and bool(self.events)

    def describe(self) -> str:
        if self.is_round:
            return "AB:FSYNC_ROUND"
        events = "+".join(e.name for e in self.events)
        who = "AB" if self.robot is None else ROBOT_NAMES[self.robot]
        return f"{who}:{events}"


FSYNC_ROUND = EventBlock(robot=None)


def _run_from(phase: Phase, length: int) -> Tuple[Phase, ...]:
    return tuple(Phase((phase + i) % 4) for i in range(length))


def _robot_block(config: Configuration, robot: int, kind: SchedulerKind,
                 lc_includes_begmove: bool) -> Optional[EventBlock]:
    """The single block this scheduler offers the robot, if any."""
    phase = config.robots[robot].phase
    if kind is SchedulerKind.CENTRALIZED:
        if phase is Phase.LOOK:
            return EventBlock(robot, _run_from(Phase.LOOK, 4))
        return None
    if kind is SchedulerKind.ASYNC:
        return EventBlock(robot, (phase,))
    if kind is SchedulerKind.ASYNC_LC:
        if phase is Phase.LOOK:
            return EventBlock(robot, _run_from(Phase.LOOK, 3 if lc_includes_begmove else 2))
        return EventBlock(robot, (phase,))
    if kind is SchedulerKind.ASYNC_MOVE:
        if phase is Phase.BEGMOVE:
            return EventBlock(robot, _run_from(Phase.BEGMOVE, 2))
        return EventBlock(robot, (phase,))
    return None


def enabled_blocks(
    config: Configuration,
    kind: SchedulerKind,
    bound: int,
    lc_includes_begmove: bool = False,
) -> List[EventBlock]:
    """All blocks the adversary may fire next, in a fixed order (robot A,
    robot B, then any simultaneous block), after the fairness filter."""
    blocks: List[EventBlock] = []
    if kind in (SchedulerKind.FSYNC, SchedulerKind.SSYNC):
        if kind is SchedulerKind.SSYNC:
            for robot in (ROBOT_A, ROBOT_B):
                block = _robot_block(config, robot, SchedulerKind.CENTRALIZED, False)
                if block is not None:
                    blocks.append(block)
        if all(r.phase is Phase.LOOK for r in config.robots):
            blocks.append(FSYNC_ROUND)
    else:
        for robot in (ROBOT_A, ROBOT_B):
            block = _robot_block(config, robot, kind, lc_includes_begmove)
            if block is not None:
                blocks.append(block)
        if kind is SchedulerKind.ASYNC_LC and all(
            r.phase is Phase.LOOK for r in config.robots
        ):
            # the adversary may fire both look-computes at the same instant
            blocks.append(
                EventBlock(None, _run_from(Phase.LOOK, 3 if lc_includes_begmove else 2))
            )

    last, streak = config.fair_run
    if last is not None and streak >= bound:
        other_has = any(b.robot is None or b.robot != last for b in blocks)
        if other_has:
            blocks = [b for b in blocks if b.robot != last]
    return blocks


def _round_sequence() -> List[Tuple[int, Phase]]:
    seq: List[Tuple[int, Phase]] = [(ROBOT_A, Phase.LOOK), (ROBOT_B, Phase.LOOK)]
    for robot in (ROBOT_A, ROBOT_B):
        seq += [(robot, Phase.COMPUTE), (robot, Phase.BEGMOVE), (robot, Phase.ENDMOVE)]
    return seq


def _block_sequence(block: EventBlock) -> List[Tuple[int, Phase]]:
    if block.is_round:
        return _round_sequence()
    if block.is_joint:
        # both looks precede both computes: each robot sees the pre-block state
        return [
            (robot, event)
            for event in block.events
            for robot in (ROBOT_A, ROBOT_B)
        ]
    return [(block.robot, event) for event in block.events]


def updated_fair(fair: FairRun, block: EventBlock) -> FairRun:
    if block.robot is None:
        return FairRun(None, 0)
    last, streak = fair
    if last == block.robot:
        return FairRun(block.robot, streak + 1)
    return FairRun(block.robot, 1)


def apply_block(config: Configuration, block: EventBlock, algo) -> Configuration:
    """Run the block's events atomically and account the activation.

    Each event must match the acting robot's current phase; a mismatch means
    the block was not taken from enabled_blocks for this configuration.
    """
    current = config
    for robot, event in _block_sequence(block):
        if current.robots[robot].phase is not event:
            raise InvariantError(
                f"block {block.describe()} expects {event.name} but robot "
                f"{ROBOT_NAMES[robot]} is at {current.robots[robot].phase.name}"
            )
        current = apply_event(current, robot, algo)
    return replace(current, fair_run=updated_fair(config.fair_run, block))


def apply_block_outcomes(
    config: Configuration,
    block: EventBlock,
    algo,
    counter: int = 0,
    counter_bound: Optional[int] = None,
) -> List[Tuple[Configuration, int]]:
    """Non-rigid variant of apply_block: every completed motion at distance
    FAR forks the outcome (NEAR branch first), so a block maps to a list of
    (configuration, interruption counter) pairs."""
    states: List[Tuple[Configuration, int]] = [(config, counter)]
    for robot, event in _block_sequence(block):
        next_states: List[Tuple[Configuration, int]] = []
        for current, ctr in states:
            if current.robots[robot].phase is not event:
                raise InvariantError(
                    f"block {block.describe()} expects {event.name} but robot "
                    f"{ROBOT_NAMES[robot]} is at "
                    f"{current.robots[robot].phase.name}"
                )
            if event is Phase.ENDMOVE and current.distance is Distance.FAR:
                next_states.extend(
                    far_resolution_outcomes(current, robot, ctr, counter_bound)
                )
            else:
                next_states.append((apply_event(current, robot, algo), ctr))
        states = next_states
    return [
        (replace(c, fair_run=updated_fair(config.fair_run, block)), ctr)
        for c, ctr in states
    ]
