"""Trajectory iteration, exact recurrence detection, exhaustive enumeration.

The update map is deterministic on a finite state space, so every
trajectory is eventually periodic. detect_cycle finds the entry point
and period of one trajectory by hashing visited states; for small
networks enumerate_state_graph resolves the entire map instead and
serves as the ground truth the detector is tested against.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .network import RESET_NONE, Network, NetworkState

DETECTED = "detected"
CENSORED = "censored"

DEFAULT_STATE_BUDGET = 1 << 20


@dataclass
class Trajectory:
    """Recorded evolution: membrane rows for t = 0..horizon, spike rows
    for t = 1..horizon, plus the spike vector of the start state."""

    states: np.ndarray
    raster: np.ndarray
    horizon: int
    s0: np.ndarray


@dataclass
class CycleReport:
    """Outcome of a recurrence scan.

    status is "detected" with the transient length and period filled in,
    or "censored" when no state repeated within the horizon.
    """

    status: str
    transient: int | None = None
    period: int | None = None


def simulate(net: Network, init: NetworkState, horizon: int) -> Trajectory:
    """Iterate the map `horizon` steps, recording everything."""
    if horizon < 1:
        raise ValueError(f"horizon must be >= 1, got {horizon}")
    v = np.asarray(init.v)
    s = np.asarray(init.s)
    states = np.empty((horizon + 1, net.n), dtype=net.state_dtype)
    raster = np.empty((horizon, net.n), dtype=np.uint8)
    states[0] = v
    for t in range(horizon):
        v, s = net.step_arrays(v, s)
        states[t + 1] = v
        raster[t] = s
    return Trajectory(
        states=states,
        raster=raster,
        horizon=horizon,
        s0=np.asarray(init.s, dtype=np.uint8).copy(),
    )


def detect_cycle(net: Network, init: NetworkState, horizon: int) -> CycleReport:
    """First-visit recurrence scan over the full (v, s) state.

    Keeps a map from visited state to first-visit time; on the first
    revisit at time t2 of a state first seen at t1 it reports transient
    t1 and period t2 - t1. The first repeat of a deterministic map is
    always the cycle entry state, so the transient is exact.
    """
    if horizon < 1:
        raise ValueError(f"horizon must be >= 1, got {horizon}")
    v = np.asarray(init.v)
    s = np.asarray(init.s)
    seen = {net.state_key(v, s): 0}
    for t in range(1, horizon + 1):
        v, s = net.step_arrays(v, s)
        key = net.state_key(v, s)
        first = seen.get(key)
        if first is not None:
            return CycleReport(DETECTED, transient=first, period=t - first)
        seen[key] = t
    return CycleReport(CENSORED)


@dataclass
class Attractor:
    """One terminal cycle: its length, basin size, and the encoded index
    of its canonical (smallest-index) member."""

    period: int
    basin_size: int
    representative: int


@dataclass
class StateGraphReport:
    """Exhaustive resolution of the update map over the whole lattice."""

    state_count: int
    transients: np.ndarray
    periods: np.ndarray
    attractor_ids: np.ndarray
    attractors: list[Attractor]


def state_space_size(net: Network) -> int:
    """Number of distinct states the map acts on.

    Without reset the spike vector is a function of the membrane vector,
    so the space is the membrane lattice alone; with threshold
    subtraction the pair (v, s) is the state and the spike bits multiply
    the count by 2^n.
    """
    total = net.domain.cardinality**net.n
    if net.reset_mode != RESET_NONE:
        total *= 2**net.n
    return total


def decode_state(net: Network, index: int) -> NetworkState:
    """State for an enumeration index; inverse of encode_state."""
    card = net.domain.cardinality
    lo = net.domain.min_value
    n = net.n
    if net.reset_mode != RESET_NONE:
        index, s_bits = divmod(index, 2**n)
        s = np.array(
            [(s_bits >> (n - 1 - i)) & 1 for i in range(n)], dtype=np.int64
        )
    else:
        s = None
    digits = []
    for _ in range(n):
        index, d = divmod(index, card)
        digits.append(d + lo)
    digits.reverse()
    v = np.array(digits, dtype=net.state_dtype)
    if s is None:
        s = net.spikes_of(v)
    return NetworkState(v=v, s=s)


def encode_state(net: Network, state: NetworkState) -> int:
    """Enumeration index of a state; inverse of decode_state."""
    card = net.domain.cardinality
    lo = net.domain.min_value
    index = 0
    for x in state.v:
        index = index * card + (int(x) - lo)
    if net.reset_mode != RESET_NONE:
        for b in state.s:
            index = index * 2 + int(b)
    return index


def _successor_indices(net: Network, total: int) -> np.ndarray:
    """Successor index for every state, computed in vectorized chunks."""
    n = net.n
    card = net.domain.cardinality
    lo = net.domain.min_value
    reset = net.reset_mode != RESET_NONE
    succ = np.empty(total, dtype=np.int64)

    if net._object_mode:
        for idx in range(total):
            state = decode_state(net, idx)
            v, s = net.step_arrays(state.v, state.s)
            succ[idx] = encode_state(net, NetworkState(v=v, s=s))
        return succ

    v_radix = card ** np.arange(n - 1, -1, -1, dtype=np.int64)
    s_radix = 2 ** np.arange(n - 1, -1, -1, dtype=np.int64)
    chunk = 1 << 15
    for start in range(0, total, chunk):
        idx = np.arange(start, min(start + chunk, total), dtype=np.int64)
        rem = idx.copy()
        if reset:
            rem, s_bits = np.divmod(rem, 1 << n)
            s = (s_bits[:, None] >> np.arange(n - 1, -1, -1)) & 1
        v = np.empty((idx.size, n), dtype=np.int64)
        for col in range(n - 1, -1, -1):
            rem, digit = np.divmod(rem, card)
            v[:, col] = digit + lo
        if not reset:
            s = (v >= net._th_exec[None, :]).astype(np.int64)

        acc = s @ net._w_exec.T
        raw = (v - (v >> net.leak_k)) + acc
        v_next = net._clamp_vec(raw)
        fired = v_next >= net._th_exec[None, :]
        s_next = fired.astype(np.int64)
        if reset:
            v_next = np.where(
                fired, net._clamp_vec(v_next - net._th_exec[None, :]), v_next
            )
        out = (v_next - lo) @ v_radix
        if reset:
            out = out * (1 << n) + s_next @ s_radix
        succ[idx] = out
    return succ


def enumerate_state_graph(
    net: Network, budget: int = DEFAULT_STATE_BUDGET
) -> StateGraphReport:
    """Resolve transient, period, and attractor for every state.

    Walks the functional graph of the map with memoization: each state
    is visited a constant number of times, so the cost is linear in the
    state count. Refuses to start when the space exceeds `budget`.
    """
    total = state_space_size(net)
    if total > budget:
        raise ValueError(
            f"state space has {total} states, over the budget of {budget}; "
            f"pass budget={total} or more to enumerate anyway"
        )
    succ = _successor_indices(net, total).tolist()

    transients = np.zeros(total, dtype=np.int64)
    periods = np.zeros(total, dtype=np.int64)
    attractor_ids = np.full(total, -1, dtype=np.int64)
    color = np.zeros(total, dtype=np.int8)  # 0 new, 1 on path, 2 resolved
    cycles: list[list[int]] = []

    for root in range(total):
        if color[root] == 2:
            continue
        path = []
        node = root
        while color[node] == 0:
            color[node] = 1
            path.append(node)
            node = succ[node]
        if color[node] == 1:
            entry = path.index(node)
            cycle = path[entry:]
            aid = len(cycles)
            cycles.append(cycle)
            p = len(cycle)
            for member in cycle:
                color[member] = 2
                transients[member] = 0
                periods[member] = p
                attractor_ids[member] = aid
            tail = path[:entry]
            base = 0
        else:
            tail = path
            p = int(periods[node])
            aid = int(attractor_ids[node])
            base = int(transients[node])
        for dist, member in enumerate(reversed(tail)):
            color[member] = 2
            transients[member] = base + dist + 1
            periods[member] = p
            attractor_ids[member] = aid

    # Canonical order: by smallest member index; remap ids to match.
    order = sorted(range(len(cycles)), key=lambda a: min(cycles[a]))
    remap = np.empty(len(cycles), dtype=np.int64)
    for new_id, old_id in enumerate(order):
        remap[old_id] = new_id
    attractor_ids = remap[attractor_ids]
    basin_sizes = np.bincount(attractor_ids, minlength=len(cycles))
    attractors = [
        Attractor(
            period=len(cycles[old_id]),
            basin_size=int(basin_sizes[new_id]),
            representative=min(cycles[old_id]),
        )
        for new_id, old_id in enumerate(order)
    ]
    return StateGraphReport(
        state_count=total,
        transients=transients,
        periods=periods,
        attractor_ids=attractor_ids,
        attractors=attractors,
    )


def detection_mismatches(net: Network, report: StateGraphReport) -> list[int]:
    """Indices of start states where detect_cycle disagrees with the
    exhaustive report; empty means full agreement."""
    bad = []
    for idx in range(report.state_count):
        expected_mu = int(report.transients[idx])
        expected_p = int(report.periods[idx])
        outcome = detect_cycle(net, decode_state(net, idx), expected_mu + expected_p)
        if (
            outcome.status != DETECTED
            or outcome.transient != expected_mu
            or outcome.period != expected_p
        ):
            bad.append(idx)
    return bad


def oracle_json(net: Network, report: StateGraphReport) -> dict:
    """JSON-ready document for an exhaustive enumeration."""
    attractors = []
    for a in report.attractors:
        rep = decode_state(net, a.representative)
        attractors.append(
            {
                "period": a.period,
                "basin_size": a.basin_size,
                "representative_state": {
                    "v": [int(x) for x in rep.v],
                    "s": [int(x) for x in rep.s],
                },
            }
        )
    return {"state_count": report.state_count, "attractors": attractors}


def write_trajectory_csv(traj: Trajectory, path) -> None:
    """Long-format export: one row per (t, neuron) with columns t,
    neuron_id, v, s, covering t = 0..horizon."""
    n = traj.states.shape[1]
    lines = ["t,neuron_id,v,s"]
    for i in range(n):
        lines.append(f"0,{i},{int(traj.states[0, i])},{int(traj.s0[i])}")
    for t in range(1, traj.horizon + 1):
        row_v = traj.states[t]
        row_s = traj.raster[t - 1]
        for i in range(n):
            lines.append(f"{t},{i},{int(row_v[i])},{int(row_s[i])}")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")
