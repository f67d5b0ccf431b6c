"""Exhaustive verification of two-robot rendezvous under luminous
look-compute-move algorithms.

The package decides whether a given algorithm gathers both robots on one
point and keeps them there, for every admissible behavior of a chosen
scheduler, and produces a replayable lasso counterexample when it does not.

Typical use:

    from rvcheck import builtin, explore, SchedulerKind
    graph, verdict = explore(builtin("Vig2Cols"), SchedulerKind.ASYNC)
    print(verdict.outcome)
"""

from .model import (
    Color,
    Distance,
    Move,
    Phase,
    LightModel,
    RobotState,
    Configuration,
    FairRun,
    InvariantError,
    ROBOT_A,
    ROBOT_B,
    ROBOT_NAMES,
    simple_configuration,
    apply_event,
)
from .algorithms import (
    AlgorithmSpec,
    Rule,
    InitKind,
    InitRegime,
    Rigidity,
    Diagnostic,
    ParseResult,
    IccResult,
    parse_algorithm,
    load_algorithm_file,
    render_algorithm,
    validate_spec,
    check_icc,
    builtin,
    BUILTIN_NAMES,
)
from .scheduling import (
    SchedulerKind,
    SCHEDULER_NAMES,
    EventBlock,
    FSYNC_ROUND,
    default_fairness_bound,
    enabled_blocks,
    apply_block,
)
from .checker import (
    PASS,
    FAIL,
    ExploreOptions,
    ResourceLimitError,
    RunStats,
    TraceStep,
    LassoTrace,
    Verdict,
    StateGraph,
    ReplayOutcome,
    initial_configurations,
    explore,
    nonrigid_explore,
    certify,
    replay,
    find_lasso,
    n_conf_bound,
)
from .traces import (
    TraceMeta,
    TraceFormatError,
    render_trace_text,
    parse_trace_text,
    render_trace_json,
    parse_trace_json,
    save_trace,
    load_trace,
)

__version__ = "1.0.0"

__all__ = [
    "Color",
    "Distance",
    "Move",
    "Phase",
    "LightModel",
    "RobotState",
    "Configuration",
    "FairRun",
    "InvariantError",
    "ROBOT_A",
    "ROBOT_B",
    "ROBOT_NAMES",
    "simple_configuration",
    "apply_event",
    "AlgorithmSpec",
    "Rule",
    "InitKind",
    "InitRegime",
    "Rigidity",
    "Diagnostic",
    "ParseResult",
    "IccResult",
    "parse_algorithm",
    "load_algorithm_file",
    "render_algorithm",
    "validate_spec",
    "check_icc",
    "builtin",
    "BUILTIN_NAMES",
    "SchedulerKind",
    "SCHEDULER_NAMES",
    "EventBlock",
    "FSYNC_ROUND",
    "default_fairness_bound",
    "enabled_blocks",
    "apply_block",
    "PASS",
    "FAIL",
    "ExploreOptions",
    "ResourceLimitError",
    "RunStats",
    "TraceStep",
    "LassoTrace",
    "Verdict",
    "StateGraph",
    "ReplayOutcome",
    "initial_configurations",
    "explore",
    "nonrigid_explore",
    "certify",
    "replay",
    "find_lasso",
    "n_conf_bound",
    "TraceMeta",
    "TraceFormatError",
    "render_trace_text",
    "parse_trace_text",
    "render_trace_json",
    "parse_trace_json",
    "save_trace",
    "load_trace",
    "__version__",
]
