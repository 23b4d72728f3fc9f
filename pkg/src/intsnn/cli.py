"""Command-line harness: simulate | sweep | focused | oracle | report."""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys
from pathlib import Path

from .config import load_config, parse_int_list
from .dynamics import (
    detect_cycle,
    detection_mismatches,
    enumerate_state_graph,
    oracle_json,
    simulate,
    write_trajectory_csv,
)
from .metrics import (
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
from .network import initial_state, network_to_json
from .svgplot import heatmap_svg, line_chart_svg, raster_svg, scatter_svg
from .sweep import (
    build_network,
    cell_seeds,
    run_grid,
    top_recurrent,
    write_manifest,
)


def _ensure_dir(path: str) -> Path:
    out = Path(path)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _write_text(path: Path, text: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def _env_workers() -> int | None:
    raw = os.environ.get("INTSNN_WORKERS")
    if raw is None or raw == "":
        return None
    try:
        return int(raw)
    except ValueError:
        raise ValueError(f"INTSNN_WORKERS must be an integer, got {raw!r}")


def _resolve_workers(flag_value: int | None, config_value: int | None) -> int | None:
    if flag_value is not None:
        return flag_value
    if config_value is not None:
        return config_value
    return _env_workers()


def _grid_overrides(args) -> dict[str, object]:
    keys = (
        "sizes", "densities", "bits", "horizon", "threshold_lo",
        "threshold_hi", "leak_k", "seeds_per_cell", "master_seed",
        "weight_lo", "weight_hi", "signedness", "overflow_mode",
        "reset_mode", "output_dir", "workers", "figures", "variant",
    )
    out: dict[str, object] = {}
    for key in keys:
        if hasattr(args, key):
            out[key] = getattr(args, key)
    return out


def _write_sweep_figures(out: Path, summaries, label: str) -> None:
    bits = [s.bits for s in summaries]
    rates = [s.mean_firing_rate for s in summaries]
    _write_text(
        out / "firing_rate_vs_bits.svg",
        line_chart_svg(
            [(label, bits, rates)],
            "mean firing rate vs bit width",
            "bits",
            "mean firing rate",
        ),
    )
    cycle_pts = [
        (s.bits, s.median_cycle) for s in summaries if s.median_cycle is not None
    ]
    if cycle_pts:
        _write_text(
            out / "cycle_vs_bits.svg",
            line_chart_svg(
                [(label, [b for b, _ in cycle_pts], [c for _, c in cycle_pts])],
                "median detected cycle length vs bit width",
                "bits",
                "median cycle length",
            ),
        )


def cmd_simulate(args) -> int:
    config = load_config(args.config, _grid_overrides(args))
    grid = config.grid
    n, density, bits = args.n, args.density, args.bits_value
    net = build_network(grid, n, density, bits)
    _, _, init_seed = cell_seeds(
        grid.master_seed, n, density, bits, args.seed
    )
    init = initial_state(net, init_seed)
    traj = simulate(net, init, grid.horizon)
    out = _ensure_dir(args.out or config.output_dir)

    write_trajectory_csv(traj, out / "trajectory.csv")
    _write_text(
        out / "network.json",
        json.dumps(network_to_json(net), indent=2, sort_keys=True) + "\n",
    )
    if config.figures:
        _write_text(
            out / "connectivity.svg",
            heatmap_svg(net.weights, f"connectivity n={n} density={density:g}"),
        )
        trace_ids = (
            parse_int_list(args.trace_neurons)
            if args.trace_neurons
            else list(range(min(3, n)))
        )
        for i in trace_ids:
            if not 0 <= i < n:
                raise ValueError(f"trace neuron {i} outside 0..{n - 1}")
        steps = list(range(grid.horizon + 1))
        series = [
            (f"neuron {i}", steps, [int(x) for x in traj.states[:, i]])
            for i in trace_ids
        ]
        _write_text(
            out / "traces.svg",
            line_chart_svg(series, "membrane traces", "step", "potential"),
        )
        _write_text(
            out / "raster.svg",
            raster_svg(traj.raster, f"spike raster n={n} bits={bits}"),
        )
        if not 0 <= args.embed_neuron < n:
            raise ValueError(f"embed neuron {args.embed_neuron} outside 0..{n - 1}")
        pairs = delay_embed(traj.states[:, args.embed_neuron], args.tau)
        _write_text(
            out / "embedding.svg",
            scatter_svg(
                pairs,
                f"delay embedding neuron {args.embed_neuron} tau={args.tau}",
                "v(t)",
                f"v(t+{args.tau})",
            ),
        )

    window = default_window(grid.horizon)
    cycle = detect_cycle(net, init, grid.horizon)
    print(
        f"run {n=} density={density:g} bits={bits} seed={args.seed}: "
        f"rate={firing_rate(traj.raster):.4f} "
        f"active={active_fraction(traj.raster):.4f} "
        f"rank={pseudo_rank(traj.raster, window)} cycle={cycle.status}"
        + (
            f" transient={cycle.transient} period={cycle.period}"
            if cycle.status == "detected"
            else ""
        )
    )
    print(f"outputs in {out}")
    return 0


def _run_and_write(grid, out: Path, workers, figures: bool, label: str) -> None:
    records = run_grid(grid, workers=workers)
    summaries = summarize(records)
    write_records_csv(records, out / "records.csv")
    write_summary_csv(summaries, out / "summary.csv")
    write_manifest(grid, out / "manifest.json")
    if figures:
        _write_sweep_figures(out, summaries, label)
    print(f"{len(records)} runs -> {out}")


def cmd_sweep(args) -> int:
    config = load_config(args.config, _grid_overrides(args))
    grid = config.grid
    grid.validate()
    workers = _resolve_workers(args.workers, config.workers)
    out = _ensure_dir(args.out or config.output_dir)
    _run_and_write(grid, out, workers, config.figures, config.variant or "sweep")
    return 0


def cmd_focused(args) -> int:
    overrides = _grid_overrides(args)
    overrides.pop("bits", None)  # raw flag string; parsed into the grid below
    config = load_config(args.config, overrides)
    grid = dataclasses.replace(
        config.grid,
        sizes=[args.n],
        densities=[args.density],
        bit_widths=(
            parse_int_list(args.bits) if args.bits else config.grid.bit_widths
        ),
        seeds_per_cell=args.seeds,
    )
    grid.validate()
    if grid.seeds_per_cell < 2:
        raise ValueError("focused runs need at least 2 seeds per cell")
    workers = _resolve_workers(args.workers, config.workers)
    out = _ensure_dir(args.out or config.output_dir)
    records = run_grid(grid, workers=workers)
    summaries = summarize(records)
    write_records_csv(records, out / "records.csv")
    write_summary_csv(summaries, out / "summary.csv")
    write_focused_csv(summaries, out / "focused_summary.csv")
    write_manifest(grid, out / "manifest.json")
    if config.figures:
        _write_sweep_figures(out, summaries, "focused")
    print(f"{len(records)} runs -> {out}")
    return 0


def cmd_oracle(args) -> int:
    overrides = _grid_overrides(args)
    overrides.update(
        {"sizes": [args.n], "densities": [args.density], "bits": [args.bits_value]}
    )
    config = load_config(args.config, overrides)
    grid = config.grid
    net = build_network(grid, args.n, args.density, args.bits_value)
    report = enumerate_state_graph(net, budget=args.budget)
    mismatches = detection_mismatches(net, report)
    if args.out:
        out = _ensure_dir(args.out)
        _write_text(
            out / "oracle.json",
            json.dumps(oracle_json(net, report), indent=2, sort_keys=True) + "\n",
        )
    print(
        f"states={report.state_count} attractors={len(report.attractors)} "
        f"periods={sorted({a.period for a in report.attractors})}"
    )
    if mismatches:
        print(f"FAIL: detector disagrees on {len(mismatches)} start states")
        return 1
    print(f"PASS: detector matches enumeration on all {report.state_count} states")
    return 0


def cmd_report(args) -> int:
    records = read_records_csv(args.records)
    top = top_recurrent(records, args.count)
    if args.out:
        out = _ensure_dir(args.out)
        write_records_csv(top, out / "top_recurrent.csv")
        write_summary_csv(summarize(records), out / "summary.csv")
    header = f"{'run_id':<20} {'n':>4} {'density':>8} {'bits':>4} {'rank':>5} {'rate':>7} cycle"
    print(header)
    for r in top:
        cycle = (
            f"{r.cycle.status} t={r.cycle.transient} p={r.cycle.period}"
            if r.cycle.status == "detected"
            else r.cycle.status
        )
        print(
            f"{r.run_id:<20} {r.n:>4} {r.density:>8g} {r.bits:>4} "
            f"{r.pseudo_rank:>5} {r.mean_firing_rate:>7.4f} {cycle}"
        )
    return 0


def _add_model_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--master-seed", dest="master_seed", type=int, default=None)
    sub.add_argument("--horizon", type=int, default=None)
    sub.add_argument("--threshold-lo", dest="threshold_lo", type=int, default=None)
    sub.add_argument("--threshold-hi", dest="threshold_hi", type=int, default=None)
    sub.add_argument("--leak-k", dest="leak_k", type=int, default=None)
    sub.add_argument("--weight-lo", dest="weight_lo", type=int, default=None)
    sub.add_argument("--weight-hi", dest="weight_hi", type=int, default=None)
    sub.add_argument("--signedness", choices=["unsigned", "signed"], default=None)
    sub.add_argument("--overflow-mode", dest="overflow_mode",
                     choices=["saturate", "wrap"], default=None)
    sub.add_argument("--reset-mode", dest="reset_mode",
                     choices=["none", "subtract_threshold"], default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="intsnn",
        description="Deterministic integer-state spiking network harness",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="one run: trajectory CSV and figures")
    sim.add_argument("--config", default=None)
    sim.add_argument("--out", default=None)
    sim.add_argument("--n", type=int, default=64)
    sim.add_argument("--density", type=float, default=0.5)
    sim.add_argument("--bits", dest="bits_value", type=int, default=8)
    sim.add_argument("--seed", type=int, default=0,
                     help="initial-condition stream index")
    sim.add_argument("--trace-neurons", dest="trace_neurons", default=None,
                     help="comma list of neurons for the trace figure")
    sim.add_argument("--embed-neuron", dest="embed_neuron", type=int, default=0)
    sim.add_argument("--tau", type=int, default=1)
    sim.add_argument("--figures", action=argparse.BooleanOptionalAction,
                     default=None)
    _add_model_flags(sim)
    sim.set_defaults(func=cmd_simulate)

    swp = sub.add_parser("sweep", help="full grid: records, summaries, figures")
    swp.add_argument("--config", default=None)
    swp.add_argument("--out", default=None)
    swp.add_argument("--workers", type=int, default=None)
    swp.add_argument("--variant", default=None)
    swp.add_argument("--figures", action=argparse.BooleanOptionalAction,
                     default=None)
    _add_model_flags(swp)
    swp.set_defaults(func=cmd_sweep)

    foc = sub.add_parser("focused", help="repeated seeds on one topology per bits")
    foc.add_argument("--config", default=None)
    foc.add_argument("--out", default=None)
    foc.add_argument("--workers", type=int, default=None)
    foc.add_argument("--n", type=int, default=64)
    foc.add_argument("--density", type=float, default=0.5)
    foc.add_argument("--bits", default=None, help="bit widths, e.g. 1..16 or 4,8,16")
    foc.add_argument("--seeds", type=int, default=5)
    foc.add_argument("--figures", action=argparse.BooleanOptionalAction,
                     default=None)
    _add_model_flags(foc)
    foc.set_defaults(func=cmd_focused)

    orc = sub.add_parser("oracle", help="exhaustive enumeration vs detector")
    orc.add_argument("--config", default=None)
    orc.add_argument("--out", default=None)
    orc.add_argument("--n", type=int, required=True)
    orc.add_argument("--bits", dest="bits_value", type=int, required=True)
    orc.add_argument("--density", type=float, default=0.5)
    orc.add_argument("--budget", type=int, default=1 << 20)
    _add_model_flags(orc)
    orc.set_defaults(func=cmd_oracle)

    rep = sub.add_parser("report", help="rank recorded runs by recurrence richness")
    rep.add_argument("--records", required=True)
    rep.add_argument("--count", type=int, default=10)
    rep.add_argument("--out", default=None)
    rep.set_defaults(func=cmd_report)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
