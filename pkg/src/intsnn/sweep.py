"""Deterministic experiment grids over size, density, and bit width."""

from __future__ import annotations

import json
import multiprocessing
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .arith import IntegerDomain
from .dynamics import CENSORED, DETECTED, CycleReport
from .metrics import (
    BitsSummary,
    MetricsRecord,
    default_window,
    pseudo_rank,
    summarize,
)
from .network import (
    Network,
    NetworkState,
    generate_topology,
    initial_state,
    sample_thresholds,
)
from .rng import (
    STREAM_INITIAL,
    STREAM_THRESHOLDS,
    STREAM_TOPOLOGY,
    derive_seed,
    float_key,
)

# Default seed calibrated once alongside the weight range: the topology
# instances it draws put the shipped focused cells in the active firing
# band with detected cycles well inside the horizon.
DEFAULT_MASTER_SEED = 2
DEFAULT_SIZES = list(range(30, 131, 2))
DEFAULT_DENSITIES = [i / 10 for i in range(1, 10)]
DEFAULT_BITS = list(range(1, 17))
DEFAULT_THRESHOLD_RANGE = (4, 8)

# Weight range chosen by one-time calibration so the focused cells sit in
# the active firing band; excitatory-only ranges drive the rate to the
# saturation ceiling instead. Recorded in every manifest.
DEFAULT_WEIGHT_RANGE = (-4, 4)

FOCUSED_SIZE = 64
FOCUSED_DENSITY = 0.5
FOCUSED_SEEDS = 5

VARIANT_PRESETS: dict[str, dict] = {
    "variant-k8": {"leak_k": 8, "densities": [0.2]},
}


@dataclass
class SweepGrid:
    """Cartesian experiment grid plus everything a cell needs to run."""

    sizes: list[int] = field(default_factory=lambda: list(DEFAULT_SIZES))
    densities: list[float] = field(
        default_factory=lambda: list(DEFAULT_DENSITIES)
    )
    bit_widths: list[int] = field(default_factory=lambda: list(DEFAULT_BITS))
    horizon: int = 1000
    threshold_range: tuple[int, int] = DEFAULT_THRESHOLD_RANGE
    leak_k: int = 1
    seeds_per_cell: int = 1
    master_seed: int = DEFAULT_MASTER_SEED
    weight_range: tuple[int, int] = DEFAULT_WEIGHT_RANGE
    signedness: str = "unsigned"
    overflow_mode: str = "saturate"
    reset_mode: str = "none"

    def validate(self) -> None:
        for name in ("sizes", "densities", "bit_widths"):
            if not getattr(self, name):
                raise ValueError(f"{name} must be nonempty")
        if self.horizon < 1:
            raise ValueError(f"horizon must be >= 1, got {self.horizon}")
        if self.seeds_per_cell < 1:
            raise ValueError(
                f"seeds_per_cell must be >= 1, got {self.seeds_per_cell}"
            )

    def cells(self) -> list[tuple[int, float, int, int]]:
        return [
            (n, density, bits, seed_idx)
            for n in self.sizes
            for density in self.densities
            for bits in self.bit_widths
            for seed_idx in range(self.seeds_per_cell)
        ]

    def run_count(self) -> int:
        return (
            len(self.sizes)
            * len(self.densities)
            * len(self.bit_widths)
            * self.seeds_per_cell
        )


def format_run_id(n: int, density: float, bits: int, seed_idx: int) -> str:
    return f"N{n:03d}-d{density:g}-b{bits:02d}-s{seed_idx}"


def cell_seeds(
    master_seed: int, n: int, density: float, bits: int, seed_idx: int
) -> tuple[int, int, int]:
    """Stream seeds for one cell, keyed by parameter values.

    Topology and thresholds ignore seed_idx, so repeated-run cells share
    one network while the initial state varies. Standalone reruns need
    only the parameter values, never a position inside some grid.
    """
    dkey = float_key(density)
    topology = derive_seed(master_seed, STREAM_TOPOLOGY, n, dkey, bits)
    thresholds = derive_seed(master_seed, STREAM_THRESHOLDS, n, dkey, bits)
    initial = derive_seed(master_seed, STREAM_INITIAL, n, dkey, bits, seed_idx)
    return topology, thresholds, initial


def build_network(grid: SweepGrid, n: int, density: float, bits: int) -> Network:
    """Network for one parameter cell of the grid."""
    topology_seed, threshold_seed, _ = cell_seeds(
        grid.master_seed, n, density, bits, 0
    )
    domain = IntegerDomain(bits, grid.signedness, grid.overflow_mode)
    weights = generate_topology(
        n, density, grid.weight_range[0], grid.weight_range[1], topology_seed
    )
    thresholds = sample_thresholds(
        n, grid.threshold_range[0], grid.threshold_range[1], threshold_seed
    )
    return Network(
        n=n,
        weights=weights,
        thresholds=thresholds,
        leak_k=grid.leak_k,
        domain=domain,
        reset_mode=grid.reset_mode,
        seed_provenance={
            "master_seed": grid.master_seed,
            "topology_seed": topology_seed,
            "threshold_seed": threshold_seed,
            "n": n,
            "density": density,
            "bits": bits,
        },
    )


def _measure_run(
    net: Network, init: NetworkState, horizon: int, window: int
) -> tuple[float, float, int, CycleReport]:
    """Full-horizon metrics without retaining membrane history.

    Stepping stops at the first exact state revisit; from there the
    trajectory is periodic, so spike totals, the active set, and the
    tail window are reconstructed exactly from the recorded prefix.
    """
    v = np.asarray(init.v)
    s = np.asarray(init.s)
    seen = {net.state_key(v, s): 0}
    rows: list[np.ndarray] = [np.empty(0)]  # rows[t] = spike row of step t
    counts = [0]
    mu = period = None
    t = 0
    while t < horizon:
        v, s = net.step_arrays(v, s)
        t += 1
        row = np.asarray(s, dtype=np.uint8)
        rows.append(row)
        counts.append(int(row.sum()))
        key = net.state_key(v, s)
        first = seen.get(key)
        if first is not None:
            mu, period = first, t - first
            break
        seen[key] = t
    t2 = t

    def row_at(step_t: int) -> int:
        if step_t <= t2:
            return step_t
        m = mu + ((step_t - mu) % period)
        # m == 0 only when mu == 0; the start state equals state t2 then.
        return t2 if m == 0 else m

    if mu is None:
        total = sum(counts)
        cycle = CycleReport(CENSORED)
    else:
        total = sum(counts[1 : t2 + 1])
        remaining = horizon - t2
        if remaining:
            cycle_counts = [counts[row_at(t2 + 1 + j)] for j in range(period)]
            total += (remaining // period) * sum(cycle_counts)
            total += sum(cycle_counts[: remaining % period])
        cycle = CycleReport(DETECTED, transient=mu, period=period)

    prefix = np.stack(rows[1 : t2 + 1])
    rate = total / (horizon * net.n)
    active = float(np.count_nonzero(prefix.any(axis=0))) / net.n
    if window <= 0:
        rank = 0
    else:
        tail_index = np.array(
            [row_at(step_t) for step_t in range(horizon - window + 1, horizon + 1)]
        )
        rank = pseudo_rank(prefix[tail_index - 1], window=window)
    return rate, active, rank, cycle


def run_cell(
    grid: SweepGrid, n: int, density: float, bits: int, seed_idx: int
) -> MetricsRecord:
    """One record, reproducible in isolation from the grid parameters."""
    net = build_network(grid, n, density, bits)
    _, _, init_seed = cell_seeds(grid.master_seed, n, density, bits, seed_idx)
    init = initial_state(net, init_seed)
    rate, active, rank, cycle = _measure_run(
        net, init, grid.horizon, default_window(grid.horizon)
    )
    return MetricsRecord(
        run_id=format_run_id(n, density, bits, seed_idx),
        n=n,
        density=density,
        bits=bits,
        seed=seed_idx,
        mean_firing_rate=rate,
        active_fraction=active,
        pseudo_rank=rank,
        cycle=cycle,
    )


def _run_cell_args(args) -> MetricsRecord:
    return run_cell(*args)


def run_grid(grid: SweepGrid, workers: int | None = None) -> list[MetricsRecord]:
    """Every cell of the grid, sorted by run_id.

    Records are independent of worker count and scheduling: each cell
    derives its own seeds from the master seed, and aggregation sorts by
    run_id before returning.
    """
    grid.validate()
    cells = grid.cells()
    if workers is not None and workers > 1 and len(cells) > 1:
        jobs = [(grid, *cell) for cell in cells]
        chunk = max(1, len(jobs) // (workers * 8))
        with multiprocessing.Pool(workers) as pool:
            records = pool.map(_run_cell_args, jobs, chunksize=chunk)
    else:
        records = [run_cell(grid, *cell) for cell in cells]
    records.sort(key=lambda r: r.run_id)
    return records


def focused_grid(
    bit_widths: list[int] | None = None,
    n: int = FOCUSED_SIZE,
    density: float = FOCUSED_DENSITY,
    seeds: int = FOCUSED_SEEDS,
    master_seed: int = DEFAULT_MASTER_SEED,
    horizon: int = 1000,
) -> SweepGrid:
    return SweepGrid(
        sizes=[n],
        densities=[density],
        bit_widths=list(bit_widths) if bit_widths else list(DEFAULT_BITS),
        horizon=horizon,
        seeds_per_cell=seeds,
        master_seed=master_seed,
    )


def run_focused(
    bit_widths: list[int] | None = None,
    n: int = FOCUSED_SIZE,
    density: float = FOCUSED_DENSITY,
    seeds: int = FOCUSED_SEEDS,
    master_seed: int = DEFAULT_MASTER_SEED,
    horizon: int = 1000,
    workers: int | None = None,
) -> tuple[list[MetricsRecord], list[BitsSummary]]:
    """Repeated runs on one topology per bit width.

    All `seeds` initial conditions of a cell see the same network; only
    the starting state stream varies. Needs seeds >= 2 so the reported
    firing-rate spread is meaningful.
    """
    if seeds < 2:
        raise ValueError(f"need at least 2 seeds for spread, got {seeds}")
    grid = focused_grid(bit_widths, n, density, seeds, master_seed, horizon)
    records = run_grid(grid, workers=workers)
    return records, summarize(records)


def top_recurrent(records: list[MetricsRecord], count: int) -> list[MetricsRecord]:
    """Records ranked by pseudo-rank, descending; ties fall back to
    firing rate (descending), then run_id (ascending)."""
    if not records:
        raise ValueError("no records to rank")
    ranked = sorted(
        records,
        key=lambda r: (-r.pseudo_rank, -r.mean_firing_rate, r.run_id),
    )
    return ranked[:count]


def build_manifest(grid: SweepGrid) -> dict:
    """Everything needed to reproduce a sweep byte for byte."""
    return {
        "version": __version__,
        "master_seed": grid.master_seed,
        "grid": {
            "sizes": list(grid.sizes),
            "densities": list(grid.densities),
            "bit_widths": list(grid.bit_widths),
            "horizon": grid.horizon,
            "threshold_range": list(grid.threshold_range),
            "leak_k": grid.leak_k,
            "seeds_per_cell": grid.seeds_per_cell,
        },
        "model": {
            "signedness": grid.signedness,
            "overflow_mode": grid.overflow_mode,
            "reset_mode": grid.reset_mode,
            "weight_range": list(grid.weight_range),
            "weights_exclude_zero": True,
        },
        "seed_tree": {
            "mixer": "splitmix64-xor-fold",
            "streams": {
                "topology": STREAM_TOPOLOGY,
                "thresholds": STREAM_THRESHOLDS,
                "initial_state": STREAM_INITIAL,
            },
            "float_keying": "ieee754-bits-little-endian",
            "cell_key": ["stream", "n", "density", "bits", "seed_index"],
        },
    }


def write_manifest(grid: SweepGrid, path) -> None:
    text = json.dumps(build_manifest(grid), indent=2, sort_keys=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text + "\n")
