"""Flat key=value run configuration.

Format: one `key = value` per line, `#` starts a comment, blank lines
are ignored. List values are comma separated; numeric lists also accept
`start..end:step` ranges (step defaults to 1), endpoint inclusive.
Precedence, lowest to highest: built-in defaults, variant preset,
config file, command-line flags.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .sweep import VARIANT_PRESETS, SweepGrid


def parse_int(text: str) -> int:
    return int(text, 0)


def parse_float(text: str) -> float:
    return float(text)


def parse_bool(text: str) -> bool:
    lowered = text.strip().lower()
    if lowered in ("1", "true", "yes", "on"):
        return True
    if lowered in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def parse_int_list(text: str) -> list[int]:
    out: list[int] = []
    for part in text.split(","):
        part = part.strip()
        if ".." in part:
            out.extend(_int_range(part))
        elif part:
            out.append(parse_int(part))
    if not out:
        raise ValueError(f"empty list: {text!r}")
    return out


def parse_float_list(text: str) -> list[float]:
    out: list[float] = []
    for part in text.split(","):
        part = part.strip()
        if ".." in part:
            out.extend(_float_range(part))
        elif part:
            out.append(parse_float(part))
    if not out:
        raise ValueError(f"empty list: {text!r}")
    return out


def _split_range(part: str) -> tuple[str, str, str | None]:
    span, _, step = part.partition(":")
    start, sep, end = span.partition("..")
    if not sep or not start or not end:
        raise ValueError(f"malformed range {part!r}; expected start..end[:step]")
    return start, end, step or None


def _int_range(part: str) -> list[int]:
    start_s, end_s, step_s = _split_range(part)
    start, end = parse_int(start_s), parse_int(end_s)
    step = parse_int(step_s) if step_s else 1
    if step < 1:
        raise ValueError(f"range step must be positive in {part!r}")
    if end < start:
        raise ValueError(f"descending range {part!r}")
    return list(range(start, end + 1, step))


def _float_range(part: str) -> list[float]:
    start_s, end_s, step_s = _split_range(part)
    start, end = parse_float(start_s), parse_float(end_s)
    step = parse_float(step_s) if step_s else 1.0
    if step <= 0:
        raise ValueError(f"range step must be positive in {part!r}")
    if end < start:
        raise ValueError(f"descending range {part!r}")
    out = []
    i = 0
    while True:
        value = round(start + i * step, 12)
        if value > end + 1e-9:
            break
        out.append(value)
        i += 1
    return out


@dataclass
class RunConfig:
    """A sweep grid plus harness plumbing."""

    grid: SweepGrid = field(default_factory=SweepGrid)
    output_dir: str = "out"
    workers: int | None = None
    figures: bool = True
    variant: str | None = None


# key -> (parser, attribute target); "grid:" prefixed targets live on the grid
_SCHEMA = {
    "sizes": (parse_int_list, "grid:sizes"),
    "densities": (parse_float_list, "grid:densities"),
    "bits": (parse_int_list, "grid:bit_widths"),
    "horizon": (parse_int, "grid:horizon"),
    "threshold_lo": (parse_int, "grid:threshold_lo"),
    "threshold_hi": (parse_int, "grid:threshold_hi"),
    "leak_k": (parse_int, "grid:leak_k"),
    "seeds_per_cell": (parse_int, "grid:seeds_per_cell"),
    "master_seed": (parse_int, "grid:master_seed"),
    "weight_lo": (parse_int, "grid:weight_lo"),
    "weight_hi": (parse_int, "grid:weight_hi"),
    "signedness": (str, "grid:signedness"),
    "overflow_mode": (str, "grid:overflow_mode"),
    "reset_mode": (str, "grid:reset_mode"),
    "output_dir": (str, "output_dir"),
    "workers": (parse_int, "workers"),
    "figures": (parse_bool, "figures"),
    "variant": (str, "variant"),
}


def parse_config_text(text: str) -> dict[str, object]:
    """Typed values keyed by schema name; rejects unknown keys."""
    values: dict[str, object] = {}
    for lineno, raw_line in enumerate(text.splitlines(), start=1):
        line = raw_line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, raw_value = line.partition("=")
        key = key.strip()
        raw_value = raw_value.strip()
        if not sep or not key:
            raise ValueError(f"line {lineno}: expected key=value, got {raw_line!r}")
        if key not in _SCHEMA:
            raise ValueError(f"line {lineno}: unknown key {key!r}")
        parser, _ = _SCHEMA[key]
        try:
            values[key] = parser(raw_value)
        except ValueError as exc:
            raise ValueError(f"line {lineno}: bad value for {key}: {exc}") from exc
    return values


def _apply(config: RunConfig, values: dict[str, object]) -> None:
    grid = config.grid
    for key, value in values.items():
        _, target = _SCHEMA[key]
        if target == "grid:threshold_lo":
            grid.threshold_range = (int(value), grid.threshold_range[1])
        elif target == "grid:threshold_hi":
            grid.threshold_range = (grid.threshold_range[0], int(value))
        elif target == "grid:weight_lo":
            grid.weight_range = (int(value), grid.weight_range[1])
        elif target == "grid:weight_hi":
            grid.weight_range = (grid.weight_range[0], int(value))
        elif target.startswith("grid:"):
            setattr(grid, target.split(":", 1)[1], value)
        else:
            setattr(config, target, value)


def build_config(
    file_text: str | None = None, overrides: dict[str, object] | None = None
) -> RunConfig:
    """Defaults, then variant preset, then file values, then overrides."""
    file_values = parse_config_text(file_text) if file_text else {}
    overrides = {k: v for k, v in (overrides or {}).items() if v is not None}
    for key in overrides:
        if key not in _SCHEMA:
            raise ValueError(f"unknown config key {key!r}")

    variant = overrides.get("variant", file_values.get("variant"))
    config = RunConfig()
    if variant is not None:
        preset = VARIANT_PRESETS.get(str(variant))
        if preset is None:
            known = ", ".join(sorted(VARIANT_PRESETS))
            raise ValueError(f"unknown variant {variant!r} (known: {known})")
        config.variant = str(variant)
        for attr, value in preset.items():
            setattr(config.grid, attr, value)
    _apply(config, file_values)
    _apply(config, overrides)
    return config


def load_config(path: str | None, overrides: dict[str, object] | None = None) -> RunConfig:
    text = None
    if path is not None:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    return build_config(text, overrides)
