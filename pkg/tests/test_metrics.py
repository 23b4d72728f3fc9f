"""Raster statistics, the exact rank surrogate, and CSV round trips."""

from fractions import Fraction

import numpy as np
import pytest

from intsnn.dynamics import CycleReport
from intsnn.metrics import (
    FOCUSED_COLUMNS,
    RECORD_COLUMNS,
    SUMMARY_COLUMNS,
    MetricsRecord,
    active_fraction,
    default_window,
    delay_embed,
    firing_rate,
    pseudo_rank,
    read_records_csv,
    summarize,
    write_focused_csv,
    write_records_csv,
    write_summary_csv,
)


def fraction_rank(matrix) -> int:
    """Gauss-Jordan elimination over exact rationals; the independent
    check for the fraction-free integer elimination."""
    rows = [[Fraction(int(x)) for x in row] for row in np.asarray(matrix)]
    if not rows:
        return 0
    rank = 0
    for c in range(len(rows[0])):
        pivot = next((i for i in range(rank, len(rows)) if rows[i][c]), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        prow = rows[rank]
        for i in range(len(rows)):
            if i != rank and rows[i][c]:
                f = rows[i][c] / prow[c]
                rows[i] = [a - f * b for a, b in zip(rows[i], prow)]
        rank += 1
    return rank


def make_record(bits, rate=0.4, rank=3, status="detected", transient=2,
                period=5, run_id="r", seed=0):
    if status != "detected":
        transient = period = None
    return MetricsRecord(
        run_id=run_id,
        n=8,
        density=0.5,
        bits=bits,
        seed=seed,
        mean_firing_rate=rate,
        active_fraction=0.5,
        pseudo_rank=rank,
        cycle=CycleReport(status=status, transient=transient, period=period),
    )


def test_firing_rate_and_active_fraction():
    raster = np.array([[1, 0], [0, 0]])
    assert firing_rate(raster) == 0.25
    assert firing_rate(np.ones((3, 4))) == 1.0
    assert active_fraction(np.array([[1, 0], [1, 0]])) == 0.5
    assert active_fraction(np.zeros((4, 3))) == 0.0
    with pytest.raises(ValueError):
        firing_rate(np.empty((0, 4)))
    with pytest.raises(ValueError):
        active_fraction(np.empty((0, 4)))


def test_default_window():
    assert default_window(1000) == 500
    assert default_window(2000) == 500
    assert default_window(7) == 3
    assert default_window(1) == 0


def test_pseudo_rank_examples():
    assert pseudo_rank(np.eye(3, dtype=np.int64), window=3) == 3
    assert pseudo_rank(np.array([[1, 1], [1, 1]]), window=2) == 1
    assert pseudo_rank(np.zeros((4, 3), dtype=np.int64), window=4) == 0
    assert pseudo_rank(np.array([[1, 1], [1, 1], [0, 1]]), window=3) == 2


def test_pseudo_rank_window_semantics():
    raster = np.array([[1, 0], [0, 1], [0, 1]])
    assert pseudo_rank(raster, window=3) == 2
    assert pseudo_rank(raster, window=2) == 1  # tail rows are duplicates
    assert pseudo_rank(raster) == 1  # default window is 3 // 2 == 1
    assert pseudo_rank(raster, window=0) == 0
    with pytest.raises(ValueError):
        pseudo_rank(raster, window=4)
    with pytest.raises(ValueError):
        pseudo_rank(np.empty((0, 2)))


def test_pseudo_rank_matches_fraction_elimination():
    rng = np.random.default_rng(12)
    for _ in range(600):
        rows = int(rng.integers(1, 13))
        cols = int(rng.integers(1, 11))
        mat = rng.integers(0, 2, size=(rows, cols))
        rank = pseudo_rank(mat, window=rows)
        assert rank == fraction_rank(mat)
        assert 0 <= rank <= min(rows, cols)


def test_delay_embed():
    assert delay_embed([1, 2, 3, 4], 1) == [(1, 2), (2, 3), (3, 4)]
    assert delay_embed([1, 2, 3, 4], 3) == [(1, 4)]
    with pytest.raises(ValueError):
        delay_embed([1, 2, 3], 0)
    with pytest.raises(ValueError):
        delay_embed([1, 2, 3], 3)


def test_summarize_even_count_median_is_half_integral():
    records = [
        make_record(4, rate=0.2, period=4, run_id="a"),
        make_record(4, rate=0.4, period=5, run_id="b", seed=1),
    ]
    (summary,) = summarize(records)
    assert summary.median_cycle == 4.5
    assert summary.mean_firing_rate == pytest.approx(0.3)
    assert summary.std_firing_rate == pytest.approx(0.1)  # population form
    assert summary.censor_fraction == 0.0
    assert summary.run_count == 2


def test_summarize_censoring_and_grouping():
    records = [
        make_record(8, period=3, run_id="a"),
        make_record(8, status="censored", run_id="b", seed=1),
        make_record(8, period=5, run_id="c", seed=2),
        make_record(2, status="censored", run_id="d"),
        make_record(4, period=7, run_id="e"),
    ]
    summaries = summarize(records)
    assert [s.bits for s in summaries] == [2, 4, 8]
    by_bits = {s.bits: s for s in summaries}
    assert by_bits[8].median_cycle == 4.0  # censored runs excluded
    assert by_bits[8].censor_fraction == pytest.approx(1 / 3)
    assert by_bits[2].median_cycle is None
    assert by_bits[2].censor_fraction == 1.0
    assert by_bits[4].median_cycle == 7.0
    # grouping is order independent
    reordered = summarize(list(reversed(records)))
    assert reordered == summaries


def test_summarize_rejects_empty():
    with pytest.raises(ValueError):
        summarize([])


def test_records_csv_round_trip(tmp_path):
    records = [
        make_record(4, rate=0.125, rank=2, period=6, run_id="N008-d0.5-b04-s0"),
        make_record(8, status="censored", run_id="N008-d0.5-b08-s0"),
    ]
    path = tmp_path / "records.csv"
    write_records_csv(records, path)
    text = path.read_text()
    assert text.splitlines()[0] == ",".join(RECORD_COLUMNS)
    # censored rows leave the transient and period cells empty
    assert text.splitlines()[2].endswith("censored,,")
    assert read_records_csv(path) == records


def test_records_csv_rejects_foreign_header(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("run_id,n\nx,1\n")
    with pytest.raises(ValueError):
        read_records_csv(path)


def test_summary_and_focused_csv_format(tmp_path):
    records = [
        make_record(4, rate=0.2, period=4, run_id="a"),
        make_record(4, rate=0.4, period=5, run_id="b", seed=1),
    ]
    summaries = summarize(records)
    spath = tmp_path / "summary.csv"
    write_summary_csv(summaries, spath)
    lines = spath.read_text().splitlines()
    assert lines[0] == ",".join(SUMMARY_COLUMNS)
    cells = lines[1].split(",")
    assert cells[0] == "4"
    assert float(cells[1]) == pytest.approx(0.3)
    assert cells[4] == "4.5"
    assert cells[6] == "2"

    fpath = tmp_path / "focused.csv"
    write_focused_csv(summaries, fpath)
    flines = fpath.read_text().splitlines()
    assert flines[0] == ",".join(FOCUSED_COLUMNS)
    fcells = flines[1].split(",")
    assert fcells[0] == "4"
    assert float(fcells[2]) == pytest.approx(0.1)
    assert fcells[3] == "2"


def test_summary_csv_blank_median_when_all_censored(tmp_path):
    records = [make_record(2, status="censored", run_id="a")]
    path = tmp_path / "summary.csv"
    write_summary_csv(summarize(records), path)
    row = path.read_text().splitlines()[1]
    assert row.split(",")[4] == ""
