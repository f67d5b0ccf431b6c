"""Compiled exploration kernels: event application, graph build, cycle search.

Everything here works on the packed integer layout from encoding.py and is
compiled with numba; importing this module without numba installed raises
ImportError and the engine falls back to the vectorized numpy lane.  The
semantics mirror the object-level model exactly (the test suite checks the
two against each other configuration by configuration).
"""

from __future__ import annotations

import numpy as np
from numba import int64, njit
from numba.typed import Dict

from .encoding import (
    BT_FULL,
    BT_LC,
    BT_LCB,
    BT_MOVE,
    BT_ROUND,
    BT_SINGLE,
    CORE_RADIX,
    LABEL_JOINT,
    LABEL_ROUND,
    ROBOT_RADIX,
    STATUS_DEAD_END,
    STATUS_INTERNAL,
    STATUS_OK,
    STATUS_STATE_LIMIT,
)

# scheduler kind codes (match scheduling.SchedulerKind values)
_CENTRALIZED = 0
_FSYNC = 1
_SSYNC = 2
_ASYNC = 3
_ASYNC_LC = 4
_ASYNC_MOVE = 5


@njit(cache=True)
def apply_event_scalar(core, me, move_tab, color_tab):
    """One event for robot `me`, selected by its phase.  Returns the new
    core, or -1 for inputs no valid exploration can produce."""
    dist = core // CORE_RADIX
    rest = core % CORE_RADIX
    ra = rest // ROBOT_RADIX
    rb = rest % ROBOT_RADIX
    r_me = ra if me == 0 else rb
    r_ot = rb if me == 0 else ra

    color = r_me // 120
    phase = (r_me // 30) % 4
    pmove = (r_me // 6) % 5
    pcolor = r_me % 6
    o_color = r_ot // 120
    o_phase = (r_ot // 30) % 4
    o_pmove = (r_ot // 6) % 5

    new_dist = dist
    new_me = r_me
    new_ot = r_ot

    if phase == 0:  # LOOK
        moving = 1 if (o_phase == 3 and o_pmove != 0 and o_pmove != 4) else 0
        gathered = 1 if (dist == 0 and moving == 0) else 0
        mv = move_tab[color, o_color, gathered, moving]
        ncl = color_tab[color, o_color, gathered, moving]
        if mv < 0:
            return -1
        new_me = color * 120 + 1 * 30 + mv * 6 + ncl
    elif phase == 1:  # COMPUTE: commit the pending color
        new_me = pcolor * 120 + 2 * 30 + pmove * 6 + 5
    elif phase == 2:  # BEGMOVE
        new_me = color * 120 + 3 * 30 + pmove * 6 + 5
    else:  # ENDMOVE: movement resolution, first match wins
        if pmove == 4 or dist == 2:
            return -1
        passive = o_pmove == 0 or o_pmove == 4
        n_opm = o_pmove
        if pmove == 0:  # STAY
            pass
        elif pmove == 3:  # MISS lands short
            new_dist = 1
            if not passive:
                n_opm = 3
        elif pmove == 2:  # TO_OTHER
            new_dist = 0
            if not passive and dist != 0:
                n_opm = 3
        else:  # TO_HALF
            if o_pmove == 1:
                n_opm = 2
            elif not passive:
                n_opm = 3
        new_me = color * 120 + 0 * 30 + 4 * 6 + 5
        new_ot = r_ot + (n_opm - o_pmove) * 6

    if me == 0:
        ra, rb = new_me, new_ot
    else:
        ra, rb = new_ot, new_me
    return new_dist * CORE_RADIX + ra * ROBOT_RADIX + rb


@njit(cache=True)
def enabled_labels(sid, kind, bound, nfair, lcb, out):
    """Fill `out` (int8[4]) with the enabled edge labels in fixed order
    (robot A, robot B, synchronous round, joint look); returns the count."""
    fair = sid % nfair
    core = sid // nfair
    rest = core % CORE_RADIX
    pa = (rest // ROBOT_RADIX // 30) % 4
    pb = (rest % ROBOT_RADIX // 30) % 4

    bt_a = -1
    bt_b = -1
    round_ok = False
    joint_ok = False

    if kind == _CENTRALIZED or kind == _SSYNC:
        if pa == 0:
            bt_a = BT_FULL
        if pb == 0:
            bt_b = BT_FULL
        if kind == _SSYNC and pa == 0 and pb == 0:
            round_ok = True
    elif kind == _FSYNC:
        if pa == 0 and pb == 0:
            round_ok = True
    elif kind == _ASYNC:
        bt_a = BT_SINGLE
        bt_b = BT_SINGLE
    elif kind == _ASYNC_LC:
        bt_a = (BT_LCB if lcb else BT_LC) if pa == 0 else BT_SINGLE
        bt_b = (BT_LCB if lcb else BT_LC) if pb == 0 else BT_SINGLE
        # both look-computes may share one instant, each seeing the pre-state
        if pa == 0 and pb == 0:
            joint_ok = True
    else:  # move-atomic
        bt_a = BT_MOVE if pa == 2 else BT_SINGLE
        bt_b = BT_MOVE if pb == 2 else BT_SINGLE

    if fair > 0:
        last = (fair - 1) // bound
        streak = (fair - 1) % bound + 1
        if streak >= bound:
            other_bt = bt_b if last == 0 else bt_a
            if other_bt != -1 or round_ok or joint_ok:
                if last == 0:
                    bt_a = -1
                else:
                    bt_b = -1

    count = 0
    if bt_a != -1:
        out[count] = bt_a
        count += 1
    if bt_b != -1:
        out[count] = 6 + bt_b
        count += 1
    if round_ok:
        out[count] = BT_ROUND
        count += 1
    if joint_ok:
        out[count] = LABEL_JOINT
        count += 1
    return count


@njit(cache=True)
def apply_label(sid, label, bound, nfair, lcb, move_tab, color_tab):
    """Apply one labeled block; returns the successor state id or -1."""
    fair = sid % nfair
    core = sid // nfair

    if label == LABEL_ROUND:
        core = apply_event_scalar(core, 0, move_tab, color_tab)  # LOOK A
        if core < 0:
            return -1
        core = apply_event_scalar(core, 1, move_tab, color_tab)  # LOOK B
        if core < 0:
            return -1
        for r in range(2):
            for _ in range(3):  # COMPUTE, BEGMOVE, ENDMOVE
                core = apply_event_scalar(core, r, move_tab, color_tab)
                if core < 0:
                    return -1
        return core * nfair  # fair resets to "nobody"

    if label == LABEL_JOINT:
        events = 3 if lcb else 2
        for _ in range(events):  # event-major: both looks before any commit
            for r in range(2):
                core = apply_event_scalar(core, r, move_tab, color_tab)
                if core < 0:
                    return -1
        return core * nfair  # both acted, fair resets

    robot = label // 6
    bt = label % 6

    steps = 1
    if bt == BT_LC or bt == BT_MOVE:
        steps = 2
    elif bt == BT_LCB:
        steps = 3
    elif bt == BT_FULL:
        steps = 4
    for _ in range(steps):
        core = apply_event_scalar(core, robot, move_tab, color_tab)
        if core < 0:
            return -1

    streak = 1
    if fair > 0 and (fair - 1) // bound == robot:
        streak = (fair - 1) % bound + 2
    return core * nfair + (1 + robot * bound + (streak - 1))


@njit(cache=True)
def build_graph(init_sids, kind, bound, nfair, lcb, move_tab, color_tab, max_states):
    """Breadth-first reachable graph from the initial states.

    Returns (status, states, indptr, succs, labels, peak_frontier) where
    states[i] is the i-th discovered state id (initials first, in the given
    order) and the CSR triple lists each state's outgoing edges in label
    order.  Discovery order is deterministic.
    """
    index = Dict.empty(key_type=int64, value_type=int64)
    cap = 1024
    states = np.empty(cap, np.int64)
    offsets = np.empty(cap, np.int64)
    n = 0
    ecap = 4096
    esucc = np.empty(ecap, np.int32)
    elab = np.empty(ecap, np.int8)
    m = 0
    status = STATUS_OK

    for i in range(init_sids.shape[0]):
        sid = init_sids[i]
        if sid not in index:
            states[n] = sid
            index[sid] = n
            n += 1

    labels_buf = np.empty(4, np.int8)
    head = 0
    peak = n
    while head < n:
        if n - head > peak:
            peak = n - head
        sid = states[head]
        offsets[head] = m
        count = enabled_labels(sid, kind, bound, nfair, lcb, labels_buf)
        if count == 0:
            status = STATUS_DEAD_END
            break
        for i in range(count):
            label = labels_buf[i]
            nsid = apply_label(sid, label, bound, nfair, lcb, move_tab, color_tab)
            if nsid < 0:
                status = STATUS_INTERNAL
                break
            if nsid in index:
                j = index[nsid]
            else:
                if n >= max_states:
                    status = STATUS_STATE_LIMIT
                    break
                if n >= cap:
                    cap = cap * 2
                    new_states = np.empty(cap, np.int64)
                    new_offsets = np.empty(cap, np.int64)
                    new_states[:n] = states[:n]
                    new_offsets[:n] = offsets[:n]
                    states = new_states
                    offsets = new_offsets
                states[n] = nsid
                index[nsid] = n
                j = n
                n += 1
            if m >= ecap:
                ecap = ecap * 2
                new_succ = np.empty(ecap, np.int32)
                new_lab = np.empty(ecap, np.int8)
                new_succ[:m] = esucc[:m]
                new_lab[:m] = elab[:m]
                esucc = new_succ
                elab = new_lab
            esucc[m] = j
            elab[m] = label
            m += 1
        if status != STATUS_OK:
            break
        head += 1

    indptr = np.empty(head + 1, np.int64)
    for i in range(head):
        indptr[i] = offsets[i]
    indptr[head] = m
    return status, states[:n].copy(), indptr, esucc[:m].copy(), elab[:m].copy(), peak


@njit(cache=True)
def find_accepting_seed(states, indptr, succs, nfair, n_init):
    """Nested depth-first search for a reachable cycle through a state with
    distance not SAME.  Returns the index of such a state (the cycle seed)
    or -1 when every reachable cycle stays gathered.

    Outer (blue) search marks the path cyan; when it finishes a not-gathered
    state it launches the inner (red) search, which reports a cycle as soon
    as it touches any cyan state (every cyan state can reach the seed along
    the blue path).  Red marks persist, so each edge is walked at most twice.
    """
    n = states.shape[0]
    color = np.zeros(n, np.uint8)  # 0 white, 1 cyan, 2 blue
    red = np.zeros(n, np.uint8)
    stack = np.empty(n, np.int64)
    eptr = np.empty(n, np.int64)
    rstack = np.empty(n, np.int64)
    reptr = np.empty(n, np.int64)

    for root in range(n_init):
        if color[root] != 0:
            continue
        top = 0
        stack[0] = root
        eptr[0] = indptr[root]
        color[root] = 1
        while top >= 0:
            v = stack[top]
            if eptr[top] < indptr[v + 1]:
                w = succs[eptr[top]]
                eptr[top] += 1
                if color[w] == 0:
                    top += 1
                    stack[top] = w
                    eptr[top] = indptr[w]
                    color[w] = 1
            else:
                accepting = (states[v] // nfair) // CORE_RADIX != 0
                if accepting:
                    rtop = 0
                    rstack[0] = v
                    reptr[0] = indptr[v]
                    red[v] = 1
                    while rtop >= 0:
                        x = rstack[rtop]
                        if reptr[rtop] < indptr[x + 1]:
                            y = succs[reptr[rtop]]
                            reptr[rtop] += 1
                            if color[y] == 1:
                                return v
                            if red[y] == 0:
                                red[y] = 1
                                rtop += 1
                                rstack[rtop] = y
                                reptr[rtop] = indptr[y]
                        else:
                            rtop -= 1
                color[v] = 2
                top -= 1
    return -1
