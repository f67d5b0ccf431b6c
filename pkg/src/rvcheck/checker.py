"""Liveness checking: exhaustive graph construction, acceptance-cycle
search, counterexample extraction, independent replay, and the FAR-branching
mode for non-rigid runs.

The property is fixed: eventually-always gathered.  It fails exactly when
some reachable cycle contains a configuration whose distance is not SAME, so
the checker reduces to reachable-lasso detection over the encoded graph."""

from __future__ import annotations

import dataclasses
import time
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

import numpy as np

from .algorithms import AlgorithmSpec, InitKind
from .engine import Backend, get_backend
from .engine.encoding import (
    BT_EVENT_COUNT,
    CORE_RADIX,
    LABEL_JOINT,
    LABEL_ROUND,
    RIGID_CORE_LIMIT,
    ROBOT_RADIX,
    STATUS_DEAD_END,
    STATUS_INTERNAL,
    STATUS_OK,
    STATUS_STATE_LIMIT,
    build_tables,
    config_to_state,
    fair_count,
    state_to_config,
)
from .engine.numpy_backend import slot_block_types
from .model import (
    Configuration,
    Distance,
    FairRun,
    InvariantError,
    Phase,
    simple_configuration,
)
from .scheduling import (
    FSYNC_ROUND,
    EventBlock,
    SchedulerKind,
    apply_block,
    apply_block_outcomes,
    default_fairness_bound,
    enabled_blocks,
)

DEFAULT_MAX_STATES = 10_000_000
DEFAULT_MAX_SECONDS = 300.0

PASS = "PASS"
FAIL = "FAIL"


class ResourceLimitError(RuntimeError):
    """Exploration hit the state or time budget before finishing."""


@dataclass(frozen=True)
class RunStats:
    stored_states: int
    transitions: int
    peak_frontier: int
    wall_time: float


@dataclass(frozen=True)
class ExploreOptions:
    fairness_bound: Optional[int] = None  # None picks 8N
    include_same_start: bool = False
    lc_includes_begmove: bool = False
    max_states: int = DEFAULT_MAX_STATES
    max_seconds: float = DEFAULT_MAX_SECONDS
    backend: Optional[str] = None  # None defers to RVCHECK_BACKEND
    # non-rigid only: None lets the scheduler cut moves short freely
    # (covered by the pigeonhole over FAR configurations), 0 disables cuts
    counter_bound: Optional[int] = None


@dataclass(frozen=True)
class TraceStep:
    """One scheduler step: the block taken and the configuration after it.
    `counter` tracks the FAR branch counter and stays 0 in rigid runs."""

    block: EventBlock
    config: Configuration
    counter: int = 0


@dataclass(frozen=True)
class LassoTrace:
    initial: Configuration
    prefix: Tuple[TraceStep, ...]
    cycle: Tuple[TraceStep, ...]
    nonrigid: bool = False

    def __post_init__(self):
        if not self.cycle:
            raise InvariantError("lasso cycle must be non-empty")

    @property
    def seed(self) -> Configuration:
        """The configuration the cycle leaves from and returns to."""
        return self.prefix[-1].config if self.prefix else self.initial

    @property
    def seed_counter(self) -> int:
        return self.prefix[-1].counter if self.prefix else 0

    def steps(self) -> Tuple[TraceStep, ...]:
        return self.prefix + self.cycle


@dataclass(frozen=True)
class Verdict:
    outcome: str  # PASS or FAIL
    trace: Optional[LassoTrace]
    stats: RunStats

    def __post_init__(self):
        if (self.outcome == FAIL) != (self.trace is not None):
            raise InvariantError("FAIL verdicts carry a trace, PASS ones do not")

    @property
    def ok(self) -> bool:
        return self.outcome == PASS


def n_conf_bound(spec: AlgorithmSpec) -> int:
    """Count of distinct non-distance configurations: per robot a color, a
    pending color (or none), a phase, and a pending move; squared for the
    pair."""
    n = len(spec.colors)
    return (n * (n + 1) * 4 * 5) ** 2


def initial_configurations(
    spec: AlgorithmSpec,
    include_same_start: bool = False,
    nonrigid: bool = False,
) -> List[Configuration]:
    """Simple starting configurations in a fixed order: the init regime's
    color pairs at NEAR (FAR when nonrigid), then SAME copies if asked."""
    regime = spec.init_regime
    if regime.kind is InitKind.FIXED:
        pairs = [(regime.color, regime.color)]
    elif regime.kind is InitKind.IDENTICAL_PAIRS:
        pairs = [(c, c) for c in spec.colors]
    else:
        pairs = [(a, b) for a in spec.colors for b in spec.colors]
    start = Distance.FAR if nonrigid else Distance.NEAR
    configs = [simple_configuration(start, a, b) for a, b in pairs]
    if include_same_start:
        configs.extend(simple_configuration(Distance.SAME, a, b) for a, b in pairs)
    return configs


class StateGraph:
    """Reachable configuration graph in compressed sparse row form.

    Nodes are encoded state ids in discovery order; edges per node follow
    the block slot order (robot A, robot B, round, simultaneous pair).
    Decoding back to Configuration objects happens on demand."""

    def __init__(self, states, indptr, succs, labels, bound, n_init,
                 kind, lc_includes_begmove):
        self.states = states
        self.indptr = indptr
        self.succs = succs
        self.labels = labels
        self.bound = bound
        self.nfair = fair_count(bound)
        self.n_init = n_init
        self.kind = kind
        self.lc_includes_begmove = lc_includes_begmove

    @property
    def node_count(self) -> int:
        return int(self.states.shape[0])

    @property
    def edge_count(self) -> int:
        return int(self.succs.shape[0])

    @property
    def initial_indices(self) -> range:
        return range(self.n_init)

    def config_at(self, i: int) -> Configuration:
        return state_to_config(int(self.states[i]), self.bound)

    def is_accepting(self, i: int) -> bool:
        """Accepting means not gathered: distance differs from SAME."""
        return int(self.states[i]) // self.nfair // CORE_RADIX != 0

    def edge_source(self, e: int) -> int:
        return int(np.searchsorted(self.indptr, e, side="right")) - 1

    def edge_block(self, e: int, source: Optional[int] = None) -> EventBlock:
        label = int(self.labels[e])
        if label == LABEL_ROUND:
            return FSYNC_ROUND
        if label == LABEL_JOINT:
            length = 3 if self.lc_includes_begmove else 2
            return EventBlock(
                None, tuple(Phase(k) for k in range(length))
            )
        if source is None:
            source = self.edge_source(e)
        robot, bt = divmod(label, 6)
        sid = int(self.states[source])
        rest = (sid // self.nfair) % CORE_RADIX
        robot_code = rest // ROBOT_RADIX if robot == 0 else rest % ROBOT_RADIX
        phase = (robot_code // 30) % 4
        events = tuple(Phase((phase + k) % 4) for k in range(BT_EVENT_COUNT[bt]))
        return EventBlock(robot=robot, events=events)

    def out_edges(self, i: int) -> range:
        return range(int(self.indptr[i]), int(self.indptr[i + 1]))

    def successors(self, i: int) -> List[Tuple[int, EventBlock]]:
        return [(int(self.succs[e]), self.edge_block(e, i)) for e in self.out_edges(i)]


def _assert_state_bound(graph: StateGraph) -> None:
    limit = RIGID_CORE_LIMIT * graph.nfair
    if graph.node_count > limit:
        raise InvariantError(
            f"stored {graph.node_count} states, above the {limit} rigid bound"
        )


def _assert_fairness_edges(graph: StateGraph) -> None:
    """Every robot-block edge out of a state where that robot already ran
    `bound` times in a row must be excused by the other robot having had no
    block of its own."""
    if graph.edge_count == 0:
        return
    states = graph.states
    nfair = graph.nfair
    bound = graph.bound
    core = states // nfair
    fair = states % nfair
    rest = core % CORE_RADIX
    pa = (rest // ROBOT_RADIX // 30) % 4
    pb = (rest % ROBOT_RADIX // 30) % 4
    bt_a, bt_b, round_ok, joint_ok = slot_block_types(
        int(graph.kind), 1 if graph.lc_includes_begmove else 0, pa, pb
    )
    both_ok = round_ok | joint_ok
    has_a = bt_a != -1
    has_b = bt_b != -1
    starved = fair > 0
    last = np.where(starved, (fair - 1) // bound, -1)
    streak = np.where(starved, (fair - 1) % bound + 1, 0)

    src = np.repeat(
        np.arange(graph.node_count), np.diff(graph.indptr).astype(np.int64)
    )
    lab = graph.labels.astype(np.int64)
    robot = np.where((lab == LABEL_ROUND) | (lab == LABEL_JOINT), -1, lab // 6)
    other_had_block = np.where(
        robot == 0,
        has_b[src] | both_ok[src],
        has_a[src] | both_ok[src],
    )
    over = (
        (robot >= 0)
        & (last[src] == robot)
        & (streak[src] >= bound)
        & other_had_block
    )
    if over.any():
        e = int(np.flatnonzero(over)[0])
        raise InvariantError(
            f"fairness bound {bound} exceeded on edge {e} "
            f"from state {int(src[e])}"
        )


def _gather_out_edges(indptr, frontier):
    counts = (indptr[frontier + 1] - indptr[frontier]).astype(np.int64)
    total = int(counts.sum())
    base = np.repeat(indptr[frontier], counts)
    offsets = np.arange(total, dtype=np.int64) - np.repeat(
        np.cumsum(counts) - counts, counts
    )
    return base + offsets


def _shortest_path_edges(graph: StateGraph, sources, target,
                         skip_trivial_target: bool) -> List[int]:
    """Breadth-first edge path from the source set to `target`.  With
    skip_trivial_target the search must take at least one step, which turns
    it into a shortest-cycle search when target is also the only source.
    Ties break toward the earliest edge in discovery order."""
    indptr, succs = graph.indptr, graph.succs
    n = graph.node_count
    parent_edge = np.full(n, -1, dtype=np.int64)
    visited = np.zeros(n, dtype=bool)
    frontier = np.asarray(sorted(set(int(s) for s in sources)), dtype=np.int64)
    if not skip_trivial_target and target in set(int(s) for s in frontier):
        return []
    visited[frontier] = True
    while frontier.size:
        edge_ids = _gather_out_edges(indptr, frontier)
        targets = succs[edge_ids].astype(np.int64)
        hit = targets == target
        if hit.any():
            e = int(edge_ids[np.flatnonzero(hit)[0]])
            path = [e]
            v = graph.edge_source(e)
            while parent_edge[v] != -1:
                e = int(parent_edge[v])
                path.append(e)
                v = graph.edge_source(e)
            path.reverse()
            return path
        new = ~visited[targets]
        if not new.any():
            break
        uniq, first_at = np.unique(targets[new], return_index=True)
        order = np.argsort(first_at, kind="stable")
        uniq_in_order = uniq[order]
        parent_edge[uniq_in_order] = edge_ids[new][first_at[order]]
        visited[uniq_in_order] = True
        frontier = uniq_in_order
    raise InvariantError("witness path search found no route to the seed")


def find_lasso(graph: StateGraph,
               backend: Optional[Backend] = None) -> Optional[LassoTrace]:
    """Nested depth-first acceptance-cycle search; on a hit, a breadth-first
    pass extracts a shortest-prefix, then shortest-cycle witness."""
    backend = backend or get_backend()
    seed = backend.find_accepting_seed(
        graph.states, graph.indptr, graph.succs, graph.nfair, graph.n_init
    )
    if seed < 0:
        return None

    prefix_edges = _shortest_path_edges(
        graph, graph.initial_indices, seed, skip_trivial_target=False
    )
    cycle_edges = _shortest_path_edges(
        graph, [seed], seed, skip_trivial_target=True
    )

    def steps_for(edges: List[int]) -> Tuple[TraceStep, ...]:
        out = []
        for e in edges:
            src = graph.edge_source(e)
            out.append(
                TraceStep(graph.edge_block(e, src), graph.config_at(int(graph.succs[e])))
            )
        return tuple(out)

    if prefix_edges:
        first_src = graph.edge_source(prefix_edges[0])
    else:
        first_src = seed
    trace = LassoTrace(
        initial=graph.config_at(first_src),
        prefix=steps_for(prefix_edges),
        cycle=steps_for(cycle_edges),
    )
    if all(step.config.distance is Distance.SAME for step in trace.cycle):
        raise InvariantError("acceptance cycle decoded to an all-gathered loop")
    return trace


def explore(
    spec: AlgorithmSpec,
    kind: SchedulerKind,
    options: Optional[ExploreOptions] = None,
) -> Tuple[StateGraph, Verdict]:
    """Build the full reachable graph and decide eventually-always gathered.

    Raises ResourceLimitError when the state or time budget runs out and
    InvariantError when the graph violates a structural guarantee (dead-end
    state, rigid state bound, fairness bound)."""
    options = options or ExploreOptions()
    bound = options.fairness_bound or default_fairness_bound(len(spec.colors))
    nfair = fair_count(bound)
    backend = get_backend(options.backend)
    move_tab, color_tab = build_tables(spec)
    inits = initial_configurations(spec, options.include_same_start, False)
    init_sids = [config_to_state(c, bound) for c in inits]

    t0 = time.perf_counter()
    status, states, indptr, succs, labels, peak = backend.build_graph(
        init_sids, kind, bound, nfair, options.lc_includes_begmove,
        move_tab, color_tab, options.max_states,
    )
    if status == STATUS_STATE_LIMIT:
        raise ResourceLimitError(
            f"state budget {options.max_states} exhausted"
        )
    if status == STATUS_DEAD_END:
        raise InvariantError("progress invariant broken: dead-end configuration")
    if status == STATUS_INTERNAL:
        raise InvariantError("observation fell outside the algorithm's tables")
    assert status == STATUS_OK

    n_init = len(dict.fromkeys(init_sids))
    graph = StateGraph(
        states, indptr, succs, labels, bound, n_init, kind,
        options.lc_includes_begmove,
    )
    _assert_state_bound(graph)
    _assert_fairness_edges(graph)

    trace = find_lasso(graph, backend)
    wall = time.perf_counter() - t0
    if wall > options.max_seconds:
        raise ResourceLimitError(
            f"run took {wall:.1f}s, budget {options.max_seconds:.1f}s"
        )
    stats = RunStats(graph.node_count, graph.edge_count, int(peak), wall)
    verdict = Verdict(FAIL if trace else PASS, trace, stats)
    return graph, verdict


# --- replay -----------------------------------------------------------------
# Deliberately object-level: no encoded ids, no shared code with the engine
# beyond the single-event semantics, so a bad kernel cannot certify itself.


@dataclass(frozen=True)
class ReplayOutcome:
    ok: bool
    step_index: Optional[int] = None  # 0-based into prefix+cycle
    reason: Optional[str] = None

    def __bool__(self) -> bool:
        return self.ok


def certify(
    trace: LassoTrace,
    spec: AlgorithmSpec,
    kind: SchedulerKind,
    bound: int,
    lc_includes_begmove: bool = False,
) -> ReplayOutcome:
    """Walk the trace step by step, requiring every block to be enabled and
    every configuration to be the exact successor, then require the cycle to
    close on its seed and to visit a non-gathered configuration.

    Non-rigid traces run under the plain fair scheduler: activation
    accounting is canonicalized away, each step may be any branch of the
    block's outcome set, the cycle must not contain an interruption (the
    counters make that visible), and the cycle itself must activate both
    robots."""
    cfg = trace.initial
    counter = 0
    for i, step in enumerate(trace.steps()):
        blocks = enabled_blocks(cfg, kind, bound, lc_includes_begmove)
        if step.block not in blocks:
            return ReplayOutcome(False, i, "block not enabled")
        if trace.nonrigid:
            outcomes = [
                (canonical_fair(c), k)
                for c, k in apply_block_outcomes(cfg, step.block, spec, counter)
            ]
            if (step.config, step.counter) not in outcomes:
                return ReplayOutcome(False, i, "configuration mismatch")
        else:
            if apply_block(cfg, step.block, spec) != step.config:
                return ReplayOutcome(False, i, "configuration mismatch")
            if step.counter:
                return ReplayOutcome(False, i, "counter in a rigid trace")
        cfg = step.config
        counter = step.counter
    if cfg != trace.seed or counter != trace.seed_counter:
        return ReplayOutcome(False, len(trace.steps()) - 1, "cycle not closed")
    if all(s.config.distance is Distance.SAME for s in trace.cycle):
        return ReplayOutcome(False, None, "cycle never leaves SAME")
    if trace.nonrigid:
        if counter >= n_conf_bound(spec):
            return ReplayOutcome(False, None, "too many interruptions")
        acted = set()
        for step in trace.cycle:
            acted |= {0, 1} if step.block.robot is None else {step.block.robot}
        if acted != {0, 1}:
            return ReplayOutcome(False, None, "cycle starves a robot")
    return ReplayOutcome(True)


def replay(
    trace: LassoTrace,
    spec: AlgorithmSpec,
    kind: SchedulerKind,
    bound: int,
    lc_includes_begmove: bool = False,
) -> bool:
    return certify(trace, spec, kind, bound, lc_includes_begmove).ok


# --- non-rigid FAR-branching mode -------------------------------------------


def canonical_fair(config: Configuration) -> Configuration:
    """Strip activation accounting: non-rigid runs model the plain fair
    scheduler, where fairness constrains cycles rather than states."""
    if config.fair_run == FairRun(None, 0):
        return config
    return dataclasses.replace(config, fair_run=FairRun(None, 0))


@dataclass(frozen=True)
class _NREdge:
    target: int
    block: EventBlock
    interruptions: int  # motions cut short inside this block (0, 1, or 2)


def _build_nonrigid_graph(spec, kind, bound, options):
    """Breadth-first reachable graph over fairness-free configurations with
    FAR starts.  Interruption branches are unconditional when the counter
    bound is None and absent when it is 0."""
    cbound = options.counter_bound
    if cbound not in (None, 0):
        raise ValueError(
            "counter_bound must be None (unlimited interruptions) or 0 "
            "(interruptions off); intermediate budgets would need the "
            "counter inside the node identity for no extra coverage"
        )
    deadline = time.perf_counter() + options.max_seconds
    roots = [
        canonical_fair(c)
        for c in initial_configurations(spec, options.include_same_start, True)
    ]
    index: Dict[Configuration, int] = {}
    configs: List[Configuration] = []
    for c in roots:
        if c not in index:
            index[c] = len(configs)
            configs.append(c)
    edges: List[List[_NREdge]] = []
    head = 0
    peak = len(configs)
    while head < len(configs):
        peak = max(peak, len(configs) - head)
        cfg = configs[head]
        out: List[_NREdge] = []
        blocks = enabled_blocks(cfg, kind, bound, options.lc_includes_begmove)
        if not blocks:
            raise InvariantError("progress invariant broken: dead-end configuration")
        for blk in blocks:
            for ncfg, k in apply_block_outcomes(cfg, blk, spec, 0, cbound):
                ncfg = canonical_fair(ncfg)
                at = index.get(ncfg)
                if at is None:
                    at = len(configs)
                    index[ncfg] = at
                    configs.append(ncfg)
                out.append(_NREdge(at, blk, k))
        edges.append(out)
        head += 1
        if len(configs) > options.max_states:
            raise ResourceLimitError(
                f"state budget {options.max_states} exhausted"
            )
        if head % 512 == 0 and time.perf_counter() > deadline:
            raise ResourceLimitError(
                f"time budget {options.max_seconds:.1f}s exhausted"
            )
    n_init = len(dict.fromkeys(roots))
    return configs, edges, n_init, peak


def _scc_components(n: int, adjacency: List[List[int]]) -> List[List[int]]:
    """Iterative strongly-connected components, emitted in reverse
    topological order with a deterministic tie-break."""
    index = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    stack: List[int] = []
    components: List[List[int]] = []
    clock = 0
    for root in range(n):
        if index[root] != -1:
            continue
        work = [(root, 0)]
        while work:
            v, ptr = work[-1]
            if ptr == 0:
                index[v] = low[v] = clock
                clock += 1
                stack.append(v)
                on_stack[v] = True
            descended = False
            targets = adjacency[v]
            for i in range(ptr, len(targets)):
                w = targets[i]
                if index[w] == -1:
                    work[-1] = (v, i + 1)
                    work.append((w, 0))
                    descended = True
                    break
                if on_stack[w]:
                    low[v] = min(low[v], index[w])
            if descended:
                continue
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp.append(w)
                    if w == v:
                        break
                components.append(comp)
            work.pop()
            if work:
                u = work[-1][0]
                low[u] = min(low[u], low[v])
    return components


def _nonrigid_witness(configs, edges, n_init, scc_nodes, scc_edges) -> LassoTrace:
    """Stitch one fair counterexample cycle inside the component, then a
    shortest prefix from the initials to its anchor."""
    member = set(scc_nodes)
    anchor = min(
        v for v in scc_nodes if configs[v].distance is not Distance.SAME
    )

    def bfs_path(sources, goal, restrict):
        parents: Dict[int, Tuple[int, _NREdge]] = {}
        seen = set(sources)
        frontier = list(sources)
        while frontier:
            if goal in seen:
                break
            nxt = []
            for v in frontier:
                for e in edges[v]:
                    if restrict and (e.interruptions or e.target not in member):
                        continue
                    if e.target in seen:
                        continue
                    seen.add(e.target)
                    parents[e.target] = (v, e)
                    nxt.append(e.target)
            frontier = nxt
        path = []
        at = goal
        while at not in sources:
            v, e = parents[at]
            path.append((v, e))
            at = v
        path.reverse()
        return path

    both = [(v, e) for v, e in scc_edges if e.block.robot is None]
    if both:
        waypoints = [both[0]]
    else:
        first = {}
        for v, e in scc_edges:
            first.setdefault(e.block.robot, (v, e))
        waypoints = [first[0], first[1]]

    cycle_path: List[Tuple[int, _NREdge]] = []
    at = anchor
    for v, e in waypoints:
        cycle_path.extend(bfs_path([at], v, restrict=True))
        cycle_path.append((v, e))
        at = e.target
    cycle_path.extend(bfs_path([at], anchor, restrict=True))

    prefix_path = bfs_path(list(range(n_init)), anchor, restrict=False)

    counter = 0
    prefix_steps = []
    for _, e in prefix_path:
        counter += e.interruptions
        prefix_steps.append(TraceStep(e.block, configs[e.target], counter))
    cycle_steps = [
        TraceStep(e.block, configs[e.target], counter) for _, e in cycle_path
    ]
    initial = configs[prefix_path[0][0]] if prefix_path else configs[anchor]
    return LassoTrace(
        initial=initial,
        prefix=tuple(prefix_steps),
        cycle=tuple(cycle_steps),
        nonrigid=True,
    )


def nonrigid_explore(
    spec: AlgorithmSpec,
    kind: SchedulerKind,
    options: Optional[ExploreOptions] = None,
) -> Verdict:
    """Decide eventually-always gathered under non-rigid motion, starting
    from distance FAR.

    The bounded-activation reduction behind the rigid lanes does not carry
    over to non-rigid non-self-stabilizing behavior, so this mode models
    the plain fair scheduler directly: activation accounting stays out of
    the node identity and fairness becomes a demand on the counterexample
    cycle, namely that both robots act within it.

    Every motion resolved at FAR branches into reaching NEAR or being cut
    short by the scheduler.  A cut consumes at least the guaranteed minimum
    motion distance, so a run can only contain finitely many: a cycle with
    an interruption edge is physically impossible and the search rejects
    it, while any reachable configuration is reachable along a simple path
    whose interruption count is below the count of distinct FAR
    configurations.  Interruption branches are therefore left unconditional
    and the budget bookkeeping lives only in the emitted trace.

    A verdict of FAIL means some strongly-connected component of the
    interruption-free subgraph contains a non-gathered configuration and
    activations of both robots; the witness lasso is stitched inside that
    component."""
    options = options or ExploreOptions()
    bound = options.fairness_bound or default_fairness_bound(len(spec.colors))
    t0 = time.perf_counter()
    configs, edges, n_init, peak = _build_nonrigid_graph(
        spec, kind, bound, options
    )
    n = len(configs)
    steady = [
        [e.target for e in out if not e.interruptions] for out in edges
    ]
    trace = None
    for comp in _scc_components(n, steady):
        member = set(comp)
        internal = [
            (v, e)
            for v in sorted(comp)
            for e in edges[v]
            if not e.interruptions and e.target in member
        ]
        if not internal:
            continue  # trivial component without a self-loop
        if all(configs[v].distance is Distance.SAME for v in comp):
            continue
        acted = set()
        for _, e in internal:
            acted |= {0, 1} if e.block.robot is None else {e.block.robot}
        if acted != {0, 1}:
            continue
        trace = _nonrigid_witness(configs, edges, n_init, comp, internal)
        break

    wall = time.perf_counter() - t0
    transitions = sum(len(out) for out in edges)
    stats = RunStats(n, transitions, peak, wall)
    return Verdict(FAIL if trace else PASS, trace, stats)
