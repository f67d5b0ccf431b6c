"""Vectorized fallback lane: the same graph build and cycle search as the
compiled kernels, expressed as whole-frontier numpy array operations plus a
plain-Python nested depth-first search.  Used when numba is unavailable or
when RVCHECK_BACKEND=numpy forces it.

The build works level by level.  A breadth-first queue discovers every state
of level k before any state of level k+1, and within a level in (source
state, block slot) order, so the discovery order, and with it every output
array, matches the compiled lane bit for bit.
"""

from __future__ import annotations

from typing import List

import numpy as np

from .encoding import (
    BT_EVENT_COUNT,
    BT_FULL,
    BT_LC,
    BT_LCB,
    BT_MOVE,
    BT_ROUND,
    BT_SINGLE,
    CORE_RADIX,
    LABEL_JOINT,
    ROBOT_RADIX,
    STATUS_DEAD_END,
    STATUS_INTERNAL,
    STATUS_OK,
    STATUS_STATE_LIMIT,
)

_CENTRALIZED = 0
_FSYNC = 1
_SSYNC = 2
_ASYNC = 3
_ASYNC_LC = 4
_ASYNC_MOVE = 5

_STEPS_BY_BT = np.array(BT_EVENT_COUNT, dtype=np.int64)


def _apply_event_vec(dist, ra, rb, me, move_tab, color_tab):
    """One event of robot `me` for every element, each dispatched on its own
    current phase.  Returns (status, dist, ra, rb); arrays are fresh."""
    r_me = ra if me == 0 else rb
    r_ot = rb if me == 0 else ra
    color = r_me // 120
    phase = (r_me // 30) % 4
    pmove = (r_me // 6) % 5
    pcolor = r_me % 6
    o_color = r_ot // 120
    o_phase = (r_ot // 30) % 4
    o_pmove = (r_ot // 6) % 5

    new_dist = dist.copy()
    new_me = r_me.copy()
    new_ot = r_ot.copy()

    idx = np.flatnonzero(phase == 0)  # LOOK
    if idx.size:
        moving = (o_phase[idx] == 3) & (o_pmove[idx] != 0) & (o_pmove[idx] != 4)
        gathered = (dist[idx] == 0) & ~moving
        mv = move_tab[
            color[idx], o_color[idx], gathered.astype(np.intp), moving.astype(np.intp)
        ].astype(np.int64)
        ncl = color_tab[
            color[idx], o_color[idx], gathered.astype(np.intp), moving.astype(np.intp)
        ].astype(np.int64)
        if (mv < 0).any():
            return STATUS_INTERNAL, dist, ra, rb
        new_me[idx] = color[idx] * 120 + 30 + mv * 6 + ncl

    idx = np.flatnonzero(phase == 1)  # COMPUTE
    if idx.size:
        new_me[idx] = pcolor[idx] * 120 + 2 * 30 + pmove[idx] * 6 + 5

    idx = np.flatnonzero(phase == 2)  # BEGMOVE
    if idx.size:
        new_me[idx] = color[idx] * 120 + 3 * 30 + pmove[idx] * 6 + 5

    idx = np.flatnonzero(phase == 3)  # ENDMOVE resolution
    if idx.size:
        pm = pmove[idx]
        opm = o_pmove[idx]
        d = dist[idx]
        if ((pm == 4) | (d == 2)).any():
            return STATUS_INTERNAL, dist, ra, rb
        passive = (opm == 0) | (opm == 4)
        nd = d.copy()
        nopm = opm.copy()
        miss = pm == 3
        nd[miss] = 1
        nopm[miss & ~passive] = 3
        toother = pm == 2
        nd[toother] = 0
        nopm[toother & ~passive & (d != 0)] = 3
        tohalf = pm == 1
        nopm[tohalf & (opm == 1)] = 2
        nopm[tohalf & ~passive & (opm != 1)] = 3
        new_dist[idx] = nd
        new_me[idx] = color[idx] * 120 + 4 * 6 + 5
        new_ot[idx] = r_ot[idx] + (nopm - opm) * 6

    if me == 0:
        return STATUS_OK, new_dist, new_me, new_ot
    return STATUS_OK, new_dist, new_ot, new_me


def _apply_run(dist, ra, rb, robot, steps, move_tab, color_tab):
    """`steps[i]` consecutive events of `robot` per element (1 to 4)."""
    status = STATUS_OK
    for k in range(int(steps.max())):
        act = np.flatnonzero(steps > k)
        status, d2, a2, b2 = _apply_event_vec(
            dist[act], ra[act], rb[act], robot, move_tab, color_tab
        )
        if status != STATUS_OK:
            return status, dist, ra, rb
        dist[act] = d2
        ra[act] = a2
        rb[act] = b2
    return status, dist, ra, rb


_ROUND_SEQUENCE = (0, 1, 0, 0, 0, 1, 1, 1)  # LOOK A, LOOK B, then full tails


def _apply_round(dist, ra, rb, move_tab, color_tab):
    status = STATUS_OK
    for robot in _ROUND_SEQUENCE:
        status, dist, ra, rb = _apply_event_vec(dist, ra, rb, robot, move_tab, color_tab)
        if status != STATUS_OK:
            break
    return status, dist, ra, rb


def _apply_joint(dist, ra, rb, lcb, move_tab, color_tab):
    # event-major order: both looks happen before either color commits
    events = 3 if lcb else 2
    status = STATUS_OK
    for _ in range(events):
        for robot in (0, 1):
            status, dist, ra, rb = _apply_event_vec(
                dist, ra, rb, robot, move_tab, color_tab
            )
            if status != STATUS_OK:
                return status, dist, ra, rb
    return status, dist, ra, rb


def slot_block_types(kind, lcb, pa, pb):
    """Per-state block type for the robot slots (-1 when absent) plus the
    round and joint-look availability, before the fairness filter."""
    none = np.full(pa.shape, -1, dtype=np.int64)
    round_ok = np.zeros(pa.shape, dtype=bool)
    joint_ok = np.zeros(pa.shape, dtype=bool)
    if kind in (_CENTRALIZED, _SSYNC):
        bt_a = np.where(pa == 0, BT_FULL, none)
        bt_b = np.where(pb == 0, BT_FULL, none)
        if kind == _SSYNC:
            round_ok = (pa == 0) & (pb == 0)
    elif kind == _FSYNC:
        bt_a = none.copy()
        bt_b = none.copy()
        round_ok = (pa == 0) & (pb == 0)
    elif kind == _ASYNC:
        bt_a = np.full(pa.shape, BT_SINGLE, dtype=np.int64)
        bt_b = bt_a.copy()
    elif kind == _ASYNC_LC:
        fused = BT_LCB if lcb else BT_LC
        bt_a = np.where(pa == 0, fused, BT_SINGLE)
        bt_b = np.where(pb == 0, fused, BT_SINGLE)
        joint_ok = (pa == 0) & (pb == 0)
    else:
        bt_a = np.where(pa == 2, BT_MOVE, BT_SINGLE)
        bt_b = np.where(pb == 2, BT_MOVE, BT_SINGLE)
    return bt_a, bt_b, round_ok, joint_ok


def build_graph(init_sids, kind, bound, nfair, lcb, move_tab, color_tab, max_states):
    """Level-synchronous counterpart of kernels.build_graph; identical
    outputs for runs that finish within the limits."""
    init = np.asarray(init_sids, dtype=np.int64)
    # dedupe while keeping the initials' given order
    _, first = np.unique(init, return_index=True)
    ordered_init = init[np.sort(first)]
    n = ordered_init.size
    known_sorted = np.sort(ordered_init)
    known_index = np.argsort(ordered_init, kind="stable").astype(np.int64)

    state_chunks: List[np.ndarray] = [ordered_init]
    succ_chunks: List[np.ndarray] = []
    label_chunks: List[np.ndarray] = []
    count_chunks: List[np.ndarray] = []
    frontier = ordered_init
    peak = n
    status = STATUS_OK

    while frontier.size:
        peak = max(peak, int(frontier.size))
        core = frontier // nfair
        fair = frontier % nfair
        dist = core // CORE_RADIX
        rest = core % CORE_RADIX
        ra = rest // ROBOT_RADIX
        rb = rest % ROBOT_RADIX
        pa = (ra // 30) % 4
        pb = (rb // 30) % 4

        bt_a, bt_b, round_ok, joint_ok = slot_block_types(kind, lcb, pa, pb)

        starved = fair > 0
        last = np.where(starved, (fair - 1) // bound, -1)
        streak = np.where(starved, (fair - 1) % bound + 1, 0)
        hit = streak >= bound
        drop_a = hit & (last == 0) & ((bt_b != -1) | round_ok | joint_ok)
        drop_b = hit & (last == 1) & ((bt_a != -1) | round_ok | joint_ok)
        bt_a = np.where(drop_a, -1, bt_a)
        bt_b = np.where(drop_b, -1, bt_b)

        counts = (bt_a != -1).astype(np.int64) + (bt_b != -1) + round_ok + joint_ok
        if (counts == 0).any():
            status = STATUS_DEAD_END
            break

        m = frontier.size
        slot_sids = np.full((m, 4), -1, dtype=np.int64)
        slot_labels = np.full((m, 4), -1, dtype=np.int64)

        for slot, (robot, bt) in enumerate(((0, bt_a), (1, bt_b))):
            idx = np.flatnonzero(bt != -1)
            if not idx.size:
                continue
            steps = _STEPS_BY_BT[bt[idx]]
            st, d2, a2, b2 = _apply_run(
                dist[idx].copy(), ra[idx].copy(), rb[idx].copy(),
                robot, steps, move_tab, color_tab,
            )
            if st != STATUS_OK:
                return st, None, None, None, None, peak
            ncore = d2 * CORE_RADIX + a2 * ROBOT_RADIX + b2
            same = last[idx] == robot
            nstreak = np.where(same, streak[idx] + 1, 1)
            nfair_val = 1 + robot * bound + (nstreak - 1)
            slot_sids[idx, slot] = ncore * nfair + nfair_val
            slot_labels[idx, slot] = robot * 6 + bt[idx]

        idx = np.flatnonzero(round_ok)
        if idx.size:
            st, d2, a2, b2 = _apply_round(
                dist[idx].copy(), ra[idx].copy(), rb[idx].copy(), move_tab, color_tab
            )
            if st != STATUS_OK:
                return st, None, None, None, None, peak
            ncore = d2 * CORE_RADIX + a2 * ROBOT_RADIX + b2
            slot_sids[idx, 2] = ncore * nfair  # fair resets
            slot_labels[idx, 2] = BT_ROUND

        idx = np.flatnonzero(joint_ok)
        if idx.size:
            st, d2, a2, b2 = _apply_joint(
                dist[idx].copy(), ra[idx].copy(), rb[idx].copy(),
                lcb, move_tab, color_tab,
            )
            if st != STATUS_OK:
                return st, None, None, None, None, peak
            ncore = d2 * CORE_RADIX + a2 * ROBOT_RADIX + b2
            slot_sids[idx, 3] = ncore * nfair  # both acted, fair resets
            slot_labels[idx, 3] = LABEL_JOINT

        valid = slot_labels.ravel() != -1
        cand = slot_sids.ravel()[valid]
        cand_labels = slot_labels.ravel()[valid].astype(np.int8)

        pos = np.searchsorted(known_sorted, cand)
        inb = pos < known_sorted.size
        found = np.zeros(cand.shape, dtype=bool)
        found[inb] = known_sorted[pos[inb]] == cand[inb]

        fresh = cand[~found]
        if fresh.size:
            uniq, first_at = np.unique(fresh, return_index=True)
            order = np.argsort(first_at, kind="stable")
            in_discovery_order = uniq[order]
            if n + in_discovery_order.size > max_states:
                status = STATUS_STATE_LIMIT
                break
            idx_for_uniq = np.empty(uniq.size, dtype=np.int64)
            idx_for_uniq[order] = n + np.arange(uniq.size, dtype=np.int64)
            ins = np.searchsorted(known_sorted, uniq)
            known_sorted = np.insert(known_sorted, ins, uniq)
            known_index = np.insert(known_index, ins, idx_for_uniq)
            state_chunks.append(in_discovery_order)
            n += in_discovery_order.size
            frontier = in_discovery_order
        else:
            frontier = np.empty(0, dtype=np.int64)

        pos = np.searchsorted(known_sorted, cand)
        succ_chunks.append(known_index[pos].astype(np.int32))
        label_chunks.append(cand_labels)
        count_chunks.append(counts)

    if status != STATUS_OK:
        return status, None, None, None, None, peak

    states_arr = np.concatenate(state_chunks)
    succs = (
        np.concatenate(succ_chunks) if succ_chunks else np.empty(0, np.int32)
    )
    labels = (
        np.concatenate(label_chunks) if label_chunks else np.empty(0, np.int8)
    )
    counts_all = (
        np.concatenate(count_chunks) if count_chunks else np.empty(0, np.int64)
    )
    indptr = np.zeros(states_arr.size + 1, dtype=np.int64)
    np.cumsum(counts_all, out=indptr[1:])
    return STATUS_OK, states_arr, indptr, succs, labels, peak


def find_accepting_seed(states, indptr, succs, nfair, n_init):
    """Plain-Python twin of kernels.find_accepting_seed: identical traversal
    order, hence an identical seed on identical graphs."""
    n = states.shape[0]
    color = np.zeros(n, np.uint8)
    red = np.zeros(n, np.uint8)
    accepting = (states // nfair) // CORE_RADIX != 0

    for root in range(n_init):
        if color[root]:
            continue
        stack = [root]
        eptr = [int(indptr[root])]
        color[root] = 1
        while stack:
            v = stack[-1]
            e = eptr[-1]
            if e < indptr[v + 1]:
                eptr[-1] = e + 1
                w = int(succs[e])
                if color[w] == 0:
                    color[w] = 1
                    stack.append(w)
                    eptr.append(int(indptr[w]))
            else:
                if accepting[v]:
                    rstack = [v]
                    rptr = [int(indptr[v])]
                    red[v] = 1
                    while rstack:
                        x = rstack[-1]
                        re = rptr[-1]
                        if re < indptr[x + 1]:
                            rptr[-1] = re + 1
                            y = int(succs[re])
                            if color[y] == 1:
                                return v
                            if not red[y]:
                                red[y] = 1
                                rstack.append(y)
                                rptr.append(int(indptr[y]))
                        else:
                            rstack.pop()
                            rptr.pop()
                color[v] = 2
                stack.pop()
                eptr.pop()
    return -1
