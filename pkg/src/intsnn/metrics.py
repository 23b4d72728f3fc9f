"""Per-run statistics and grouped summaries over spike rasters."""

from __future__ import annotations

import statistics
from dataclasses import dataclass

import numpy as np

from .dynamics import CENSORED, DETECTED, CycleReport

WINDOW_CAP = 500

RECORD_COLUMNS = [
    "run_id",
    "n",
    "density",
    "bits",
    "seed",
    "mean_firing_rate",
    "active_fraction",
    "pseudo_rank",
    "cycle_status",
    "transient",
    "period",
]

SUMMARY_COLUMNS = [
    "bits",
    "mean_firing_rate",
    "mean_active_fraction",
    "mean_pseudo_rank",
    "median_cycle",
    "censor_fraction",
    "run_count",
]

FOCUSED_COLUMNS = ["bits", "mean_firing_rate", "std_firing_rate", "run_count"]


@dataclass
class MetricsRecord:
    """Statistics and provenance of a single run."""

    run_id: str
    n: int
    density: float
    bits: int
    seed: int
    mean_firing_rate: float
    active_fraction: float
    pseudo_rank: int
    cycle: CycleReport


@dataclass
class BitsSummary:
    """Aggregate over all records sharing one bit width."""

    bits: int
    mean_firing_rate: float
    mean_active_fraction: float
    mean_pseudo_rank: float
    median_cycle: float | None
    censor_fraction: float
    run_count: int
    std_firing_rate: float


def default_window(horizon: int) -> int:
    """Tail window length used by the rank surrogate."""
    return min(WINDOW_CAP, horizon // 2)


def firing_rate(raster: np.ndarray) -> float:
    """Fraction of (step, neuron) slots carrying a spike."""
    r = np.asarray(raster)
    if r.size == 0:
        raise ValueError("empty raster")
    return float(np.count_nonzero(r)) / r.size


def active_fraction(raster: np.ndarray) -> float:
    """Fraction of neurons that spike at least once."""
    r = np.asarray(raster)
    if r.size == 0:
        raise ValueError("empty raster")
    return float(np.count_nonzero(r.any(axis=0))) / r.shape[1]


def pseudo_rank(raster: np.ndarray, window: int | None = None) -> int:
    """Exact rank over the rationals of the last `window` raster rows.

    Computed by fraction-free integer elimination, so there is no
    floating-point tolerance anywhere. Duplicate and all-zero rows and
    all-zero columns are discarded first; neither changes the rank.
    `window` defaults to min(500, T // 2).
    """
    r = np.asarray(raster)
    if r.ndim != 2 or r.size == 0:
        raise ValueError("raster must be a nonempty 2-d matrix")
    horizon = r.shape[0]
    if window is None:
        window = default_window(horizon)
    if window > horizon:
        raise ValueError(f"window {window} exceeds horizon {horizon}")
    if window <= 0:
        return 0
    tail = np.asarray(r[horizon - window :], dtype=np.int64)
    seen = set()
    kept = []
    for row in tail:
        key = row.tobytes()
        if key in seen or not row.any():
            continue
        seen.add(key)
        kept.append(row)
    if not kept:
        return 0
    mat = np.stack(kept)
    mat = mat[:, mat.any(axis=0)]
    return _fraction_free_rank([[int(x) for x in row] for row in mat])


def _fraction_free_rank(work: list[list[int]]) -> int:
    """Bareiss elimination on exact integers; returns the matrix rank."""
    m = len(work)
    ncols = len(work[0])
    rank = 0
    prev = 1
    for c in range(ncols):
        pivot = None
        for i in range(rank, m):
            if work[i][c]:
                pivot = i
                break
        if pivot is None:
            continue
        work[rank], work[pivot] = work[pivot], work[rank]
        prow = work[rank]
        p = prow[c]
        for i in range(rank + 1, m):
            row = work[i]
            f = row[c]
            for j in range(c + 1, ncols):
                row[j] = (p * row[j] - f * prow[j]) // prev
            row[c] = 0
        prev = p
        rank += 1
        if rank == m:
            break
    return rank


def delay_embed(trace, tau: int) -> list[tuple[int, int]]:
    """Pairs (x(t), x(t + tau)) for t = 0..len - tau - 1."""
    values = [int(x) for x in trace]
    if tau < 1:
        raise ValueError(f"tau must be >= 1, got {tau}")
    if tau >= len(values):
        raise ValueError(f"tau {tau} must be below trace length {len(values)}")
    return [(values[t], values[t + tau]) for t in range(len(values) - tau)]


def summarize(records: list[MetricsRecord]) -> list[BitsSummary]:
    """Per-bit-width aggregates, ordered by bits.

    Means run over every record in the group. The cycle median covers
    detected runs only; an even count averages the two central values,
    so half-integral medians are expected. Censored runs are counted in
    censor_fraction instead. Standard deviation is the population form.
    """
    if not records:
        raise ValueError("no records to summarize")
    groups: dict[int, list[MetricsRecord]] = {}
    for record in records:
        groups.setdefault(record.bits, []).append(record)
    out = []
    for bits in sorted(groups):
        group = groups[bits]
        rates = [r.mean_firing_rate for r in group]
        periods = [
            r.cycle.period for r in group if r.cycle.status == DETECTED
        ]
        censored = sum(1 for r in group if r.cycle.status == CENSORED)
        out.append(
            BitsSummary(
                bits=bits,
                mean_firing_rate=statistics.fmean(rates),
                mean_active_fraction=statistics.fmean(
                    r.active_fraction for r in group
                ),
                mean_pseudo_rank=statistics.fmean(
                    r.pseudo_rank for r in group
                ),
                median_cycle=(
                    float(statistics.median(periods)) if periods else None
                ),
                censor_fraction=censored / len(group),
                run_count=len(group),
                std_firing_rate=statistics.pstdev(rates),
            )
        )
    return out


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_records_csv(records: list[MetricsRecord], path) -> None:
    lines = [",".join(RECORD_COLUMNS)]
    for r in records:
        lines.append(
            ",".join(
                _fmt(x)
                for x in (
                    r.run_id,
                    r.n,
                    r.density,
                    r.bits,
                    r.seed,
                    r.mean_firing_rate,
                    r.active_fraction,
                    r.pseudo_rank,
                    r.cycle.status,
                    r.cycle.transient,
                    r.cycle.period,
                )
            )
        )
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def read_records_csv(path) -> list[MetricsRecord]:
    with open(path, "r", encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    if not lines or lines[0] != ",".join(RECORD_COLUMNS):
        raise ValueError(f"unrecognized records header in {path}")
    records = []
    for line in lines[1:]:
        parts = line.split(",")
        if len(parts) != len(RECORD_COLUMNS):
            raise ValueError(f"malformed records row: {line!r}")
        status = parts[8]
        cycle = CycleReport(
            status=status,
            transient=int(parts[9]) if parts[9] else None,
            period=int(parts[10]) if parts[10] else None,
        )
        records.append(
            MetricsRecord(
                run_id=parts[0],
                n=int(parts[1]),
                density=float(parts[2]),
                bits=int(parts[3]),
                seed=int(parts[4]),
                mean_firing_rate=float(parts[5]),
                active_fraction=float(parts[6]),
                pseudo_rank=int(parts[7]),
                cycle=cycle,
            )
        )
    return records


def write_summary_csv(summaries: list[BitsSummary], path) -> None:
    lines = [",".join(SUMMARY_COLUMNS)]
    for s in summaries:
        lines.append(
            ",".join(
                _fmt(x)
                for x in (
                    s.bits,
                    s.mean_firing_rate,
                    s.mean_active_fraction,
                    s.mean_pseudo_rank,
                    s.median_cycle,
                    s.censor_fraction,
                    s.run_count,
                )
            )
        )
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def write_focused_csv(summaries: list[BitsSummary], path) -> None:
    """Companion table for repeated-run cells: firing-rate spread."""
    lines = [",".join(FOCUSED_COLUMNS)]
    for s in summaries:
        lines.append(
            ",".join(
                _fmt(x)
                for x in (s.bits, s.mean_firing_rate, s.std_firing_rate, s.run_count)
            )
        )
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")
