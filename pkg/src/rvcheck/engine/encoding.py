"""Integer layout shared by the exploration backends.

A robot packs into one small integer

    robot = color*120 + phase*30 + pending_move*6 + pending_color

(color < 5, phase < 4, pending_move < 5, pending_color < 6 where 5 means
"none"), so robot < 600.  A configuration core packs distance and both
robots

    core = distance*360000 + robot_a*600 + robot_b

which makes the rigid cores (distance SAME or NEAR) exactly the range
[0, 720000).  A full exploration state appends the fairness value

    state = core*nfair + fair

where fair is 0 for "nobody has acted yet" and 1 + robot*bound + (streak-1)
otherwise, giving nfair = 1 + 2*bound values.

Edges carry one label byte, robot*6 + block_type; the synchronous round is
block type 5 with robot slot 0, and the simultaneous look-compute of both
robots takes the same block type in robot slot 1.
"""

from __future__ import annotations

from typing import Optional, Tuple

import numpy as np

from ..model import (
    Color,
    Configuration,
    Distance,
    FairRun,
    Move,
    Phase,
    RobotState,
)

ROBOT_RADIX = 600
CORE_RADIX = 360000          # ROBOT_RADIX squared
RIGID_CORE_LIMIT = 720000    # two rigid distance values
PCOLOR_NONE = 5

# block types inside an edge label (label = robot*6 + block type)
BT_SINGLE = 0   # one event at the robot's current phase
BT_LC = 1       # LOOK+COMPUTE
BT_LCB = 2      # LOOK+COMPUTE+BEGMOVE
BT_MOVE = 3     # BEGMOVE+ENDMOVE
BT_FULL = 4     # LOOK..ENDMOVE
BT_ROUND = 5    # fully synchronous round, both robots

BT_EVENT_COUNT = (1, 2, 3, 2, 4)  # events per block type, BT_ROUND aside

LABEL_ROUND = BT_ROUND   # robot slot 0
LABEL_JOINT = 6 + BT_ROUND  # both look-computes at one instant, robot slot 1

# build_graph status codes
STATUS_OK = 0
STATUS_STATE_LIMIT = 1
STATUS_DEAD_END = 3
STATUS_INTERNAL = 4


def fair_count(bound: int) -> int:
    return 1 + 2 * bound


def encode_fair(last_active: Optional[int], streak: int, bound: int) -> int:
    if last_active is None:
        return 0
    return 1 + last_active * bound + (streak - 1)


def decode_fair(fair: int, bound: int) -> FairRun:
    if fair == 0:
        return FairRun(None, 0)
    return FairRun((fair - 1) // bound, (fair - 1) % bound + 1)


def encode_robot_state(state: RobotState) -> int:
    pcolor = PCOLOR_NONE if state.pending_color is None else int(state.pending_color)
    return (
        int(state.color) * 120
        + int(state.phase) * 30
        + int(state.pending_move) * 6
        + pcolor
    )


def decode_robot_state(value: int) -> RobotState:
    color, rest = divmod(value, 120)
    phase, rest = divmod(rest, 30)
    pmove, pcolor = divmod(rest, 6)
    return RobotState(
        color=Color(color),
        phase=Phase(phase),
        pending_move=Move(pmove),
        pending_color=None if pcolor == PCOLOR_NONE else Color(pcolor),
    )


def config_to_core(config: Configuration) -> int:
    return (
        int(config.distance) * CORE_RADIX
        + encode_robot_state(config.robots[0]) * ROBOT_RADIX
        + encode_robot_state(config.robots[1])
    )


def core_to_config(core: int, fair: FairRun = FairRun(None, 0)) -> Configuration:
    distance, rest = divmod(core, CORE_RADIX)
    robot_a, robot_b = divmod(rest, ROBOT_RADIX)
    return Configuration(
        distance=Distance(distance),
        robots=(decode_robot_state(robot_a), decode_robot_state(robot_b)),
        fair_run=fair,
    )


def config_to_state(config: Configuration, bound: int) -> int:
    nfair = fair_count(bound)
    last, streak = config.fair_run
    return config_to_core(config) * nfair + encode_fair(last, streak, bound)


def state_to_config(sid: int, bound: int) -> Configuration:
    nfair = fair_count(bound)
    core, fair = divmod(sid, nfair)
    return core_to_config(core, decode_fair(fair, bound))


def build_tables(spec) -> Tuple[np.ndarray, np.ndarray]:
    """Bake the algorithm plus the LOOK-time adjustments into two lookup
    arrays indexed [my_color, other_color, gathered, other_moving]: the
    stored pending move (stationarized, MISS-demoted) and pending color.
    Color pairs outside the declared set hold -1; valid explorations never
    read them."""
    from ..model import Observation, stationarize

    move_tab = np.full((5, 5, 2, 2), -1, dtype=np.int8)
    color_tab = np.full((5, 5, 2, 2), -1, dtype=np.int8)
    for me in spec.colors:
        for other in spec.colors:
            for gathered in (False, True):
                for moving in (False, True):
                    if gathered and moving:
                        # unobservable; keep the table total anyway
                        command_obs = Observation(me, other, False, True)
                    else:
                        command_obs = Observation(me, other, gathered, moving)
                    command = spec.evaluate(command_obs)
                    move = stationarize(command.move, command_obs.gathered)
                    if command_obs.other_moving and move in (
                        Move.TO_HALF,
                        Move.TO_OTHER,
                    ):
                        move = Move.MISS
                    move_tab[me, other, int(gathered), int(moving)] = int(move)
                    color_tab[me, other, int(gathered), int(moving)] = int(
                        command.new_color
                    )
    return move_tab, color_tab
