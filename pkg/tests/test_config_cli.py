"""Config parsing and the command-line entry points."""

import json
import subprocess
import sys

import pytest

from intsnn.cli import main
from intsnn.config import (
    build_config,
    load_config,
    parse_bool,
    parse_config_text,
    parse_float_list,
    parse_int_list,
)
from intsnn.metrics import read_records_csv
from intsnn.sweep import run_cell


def test_list_parsers():
    assert parse_int_list("1,2,3") == [1, 2, 3]
    assert parse_int_list("30..40:2") == [30, 32, 34, 36, 38, 40]
    assert parse_int_list("1..4") == [1, 2, 3, 4]
    assert parse_int_list("1..3, 8") == [1, 2, 3, 8]
    assert parse_float_list("0.1..0.9:0.2") == [0.1, 0.3, 0.5, 0.7, 0.9]
    assert parse_float_list("0.25, 0.75") == [0.25, 0.75]
    with pytest.raises(ValueError):
        parse_int_list("")
    with pytest.raises(ValueError):
        parse_int_list("5..1")
    with pytest.raises(ValueError):
        parse_int_list("1..5:0")
    with pytest.raises(ValueError):
        parse_float_list("..5")


def test_parse_bool():
    assert parse_bool("yes") and parse_bool("1") and parse_bool("True")
    assert not parse_bool("off") and not parse_bool("0")
    with pytest.raises(ValueError):
        parse_bool("maybe")


def test_parse_config_text():
    text = """
    # run shape
    sizes = 4, 6
    densities = 0.5
    bits = 1..3
    horizon = 50   # inline comment
    workers = 2
    figures = off
    """
    values = parse_config_text(text)
    assert values["sizes"] == [4, 6]
    assert values["bits"] == [1, 2, 3]
    assert values["horizon"] == 50
    assert values["workers"] == 2
    assert values["figures"] is False


def test_parse_config_text_errors_carry_line_numbers():
    with pytest.raises(ValueError, match="line 2"):
        parse_config_text("sizes = 4\nnot a pair\n")
    with pytest.raises(ValueError, match="unknown key"):
        parse_config_text("grid_size = 4\n")
    with pytest.raises(ValueError, match="line 1"):
        parse_config_text("horizon = soon\n")


def test_build_config_defaults():
    config = build_config()
    grid = config.grid
    assert len(grid.sizes) == 51 and grid.sizes[0] == 30 and grid.sizes[-1] == 130
    assert grid.densities == [i / 10 for i in range(1, 10)]
    assert grid.bit_widths == list(range(1, 17))
    assert grid.horizon == 1000
    assert grid.threshold_range == (4, 8)
    assert grid.weight_range == (-4, 4)
    assert grid.leak_k == 1
    assert grid.seeds_per_cell == 1
    assert config.output_dir == "out"
    assert config.workers is None
    assert config.figures is True


def test_build_config_precedence():
    # variant preset below file values below overrides
    text = "variant = variant-k8\ndensities = 0.4\nhorizon = 200\n"
    config = build_config(text, {"horizon": 100})
    assert config.grid.leak_k == 8  # from the preset
    assert config.grid.densities == [0.4]  # file beats preset
    assert config.grid.horizon == 100  # override beats file
    assert config.variant == "variant-k8"


def test_build_config_half_open_tuples_and_unknowns():
    config = build_config("threshold_lo = 2\nweight_hi = 9\n")
    assert config.grid.threshold_range == (2, 8)
    assert config.grid.weight_range == (-4, 9)
    with pytest.raises(ValueError, match="variant-k8"):
        build_config("variant = variant-k9\n")
    with pytest.raises(ValueError):
        build_config(None, {"not_a_key": 1})


def test_load_config_reads_file(tmp_path):
    path = tmp_path / "run.cfg"
    path.write_text("horizon = 25\n")
    assert load_config(str(path)).grid.horizon == 25
    assert load_config(None).grid.horizon == 1000


def simulate_args(out, extra=()):
    return [
        "simulate", "--out", str(out), "--n", "6", "--density", "0.5",
        "--bits", "3", "--horizon", "40", *extra,
    ]


def test_cli_simulate_writes_outputs(tmp_path, capsys):
    out = tmp_path / "sim"
    assert main(simulate_args(out)) == 0
    for name in (
        "trajectory.csv", "network.json", "connectivity.svg",
        "traces.svg", "raster.svg", "embedding.svg",
    ):
        assert (out / name).exists(), name
    doc = json.loads((out / "network.json").read_text())
    assert doc["n"] == 6 and doc["bits"] == 3
    printed = capsys.readouterr().out
    assert "rate=" in printed and "cycle=" in printed


def test_cli_simulate_deterministic_bytes(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    assert main(simulate_args(a)) == 0
    assert main(simulate_args(b)) == 0
    for name in ("trajectory.csv", "network.json", "traces.svg", "raster.svg"):
        assert (a / name).read_bytes() == (b / name).read_bytes(), name


def test_cli_simulate_quiescent_raster_is_empty(tmp_path):
    out = tmp_path / "quiet"
    args = [
        "simulate", "--out", str(out), "--n", "6", "--density", "0.5",
        "--bits", "2", "--horizon", "40",
    ]
    assert main(args) == 0
    assert 'class="spike"' not in (out / "raster.svg").read_text()


def test_cli_simulate_rejects_bad_neuron_index(tmp_path, capsys):
    out = tmp_path / "sim"
    assert main(simulate_args(out, ("--embed-neuron", "9"))) == 1
    assert "error:" in capsys.readouterr().err


def sweep_args(out, extra=()):
    return [
        "sweep", "--out", str(out), "--horizon", "40", *extra,
    ]


def write_small_config(tmp_path):
    path = tmp_path / "small.cfg"
    path.write_text("sizes = 3, 4\ndensities = 0.5\nbits = 2..4\nhorizon = 40\n")
    return path


def test_cli_sweep_outputs_and_determinism(tmp_path):
    cfg = write_small_config(tmp_path)
    a, b = tmp_path / "a", tmp_path / "b"
    assert main(["sweep", "--config", str(cfg), "--out", str(a)]) == 0
    assert main(["sweep", "--config", str(cfg), "--out", str(b)]) == 0
    for name in ("records.csv", "summary.csv", "manifest.json",
                 "firing_rate_vs_bits.svg"):
        assert (a / name).exists(), name
        assert (a / name).read_bytes() == (b / name).read_bytes(), name
    records = read_records_csv(a / "records.csv")
    assert len(records) == 6
    manifest = json.loads((a / "manifest.json").read_text())
    assert manifest["grid"]["sizes"] == [3, 4]
    assert manifest["grid"]["horizon"] == 40


def test_cli_sweep_flag_overrides_config(tmp_path):
    cfg = write_small_config(tmp_path)
    out = tmp_path / "o"
    assert main(["sweep", "--config", str(cfg), "--out", str(out),
                 "--horizon", "20"]) == 0
    manifest = json.loads((out / "manifest.json").read_text())
    assert manifest["grid"]["horizon"] == 20


def test_cli_sweep_rejects_empty_bits(tmp_path, capsys):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("bits =\n")
    assert main(["sweep", "--config", str(cfg), "--out", str(tmp_path / "o")]) == 1
    assert "error:" in capsys.readouterr().err


def test_cli_sweep_honors_worker_env(tmp_path, monkeypatch):
    cfg = write_small_config(tmp_path)
    serial, pooled = tmp_path / "serial", tmp_path / "pooled"
    assert main(["sweep", "--config", str(cfg), "--out", str(serial)]) == 0
    monkeypatch.setenv("INTSNN_WORKERS", "2")
    assert main(["sweep", "--config", str(cfg), "--out", str(pooled)]) == 0
    assert (serial / "records.csv").read_bytes() == (pooled / "records.csv").read_bytes()
    monkeypatch.setenv("INTSNN_WORKERS", "two")
    assert main(["sweep", "--config", str(cfg), "--out", str(tmp_path / "x")]) == 1


def test_cli_focused(tmp_path):
    out = tmp_path / "focused"
    args = [
        "focused", "--out", str(out), "--n", "6", "--density", "0.5",
        "--bits", "2,3", "--seeds", "3", "--horizon", "40",
    ]
    assert main(args) == 0
    assert (out / "focused_summary.csv").exists()
    records = read_records_csv(out / "records.csv")
    assert len(records) == 6
    assert {r.seed for r in records} == {0, 1, 2}
    assert main(["focused", "--out", str(tmp_path / "f1"), "--n", "6",
                 "--seeds", "1", "--horizon", "40"]) == 1


def test_cli_oracle_pass_and_budget_refusal(tmp_path, capsys):
    out = tmp_path / "oracle"
    assert main(["oracle", "--n", "1", "--bits", "2", "--out", str(out)]) == 0
    printed = capsys.readouterr().out
    assert "PASS" in printed
    doc = json.loads((out / "oracle.json").read_text())
    assert doc["state_count"] == 4

    assert main(["oracle", "--n", "3", "--bits", "8"]) == 1
    captured = capsys.readouterr()
    assert "16777216" in captured.err


def test_cli_report(tmp_path, capsys):
    src = tmp_path / "src"
    cfg = write_small_config(tmp_path)
    assert main(["sweep", "--config", str(cfg), "--out", str(src)]) == 0
    capsys.readouterr()
    out = tmp_path / "rep"
    args = ["report", "--records", str(src / "records.csv"), "--count", "3",
            "--out", str(out)]
    assert main(args) == 0
    printed = capsys.readouterr().out
    assert "run_id" in printed
    top = read_records_csv(out / "top_recurrent.csv")
    assert len(top) == 3
    assert (out / "summary.csv").exists()


def test_cli_cell_rerun_matches_sweep_row(tmp_path):
    cfg = write_small_config(tmp_path)
    out = tmp_path / "o"
    assert main(["sweep", "--config", str(cfg), "--out", str(out)]) == 0
    records = read_records_csv(out / "records.csv")
    probe = records[3]
    config = load_config(str(cfg))
    alone = run_cell(config.grid, probe.n, probe.density, probe.bits, probe.seed)
    assert alone == probe


def test_module_invocation_smoke():
    result = subprocess.run(
        [sys.executable, "-m", "intsnn", "oracle", "--n", "1", "--bits", "2"],
        capture_output=True, text=True, timeout=120,
    )
    assert result.returncode == 0
    assert "PASS" in result.stdout
