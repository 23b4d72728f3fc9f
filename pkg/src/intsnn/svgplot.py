"""Minimal deterministic SVG emission for run figures.

Everything is plain string assembly with fixed-precision coordinates,
so identical inputs always produce identical bytes. The figures are
diagnostic, not publication-grade.
"""

from __future__ import annotations

import numpy as np

MARGIN_LEFT = 56.0
MARGIN_RIGHT = 16.0
MARGIN_TOP = 34.0
MARGIN_BOTTOM = 44.0

AXIS_COLOR = "#444444"
SERIES_COLORS = ["#1f6fb4", "#d2542c", "#3a8f5d", "#8255a8", "#9c6a1f"]


def _f(x: float) -> str:
    return f"{x:.2f}"


def _escape(text: str) -> str:
    return (
        str(text)
        .replace("&", "&amp;")
        .replace("<", "&lt;")
        .replace(">", "&gt;")
    )


def _document(width: float, height: float, body: list[str]) -> str:
    head = (
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_f(width)}" '
        f'height="{_f(height)}" viewBox="0 0 {_f(width)} {_f(height)}">'
    )
    bg = f'<rect x="0" y="0" width="{_f(width)}" height="{_f(height)}" fill="#ffffff"/>'
    return "\n".join([head, bg, *body, "</svg>"]) + "\n"


def _title(text: str, width: float) -> str:
    return (
        f'<text x="{_f(width / 2)}" y="20" font-family="sans-serif" '
        f'font-size="13" text-anchor="middle">{_escape(text)}</text>'
    )


def _ticks(lo: float, hi: float, count: int = 5) -> list[float]:
    if count < 2:
        return [lo]
    return [lo + (hi - lo) * i / (count - 1) for i in range(count)]


def _tick_label(value: float) -> str:
    return f"{value:.4g}"


class _Frame:
    """Linear data-to-pixel mapping with drawn axes and tick labels."""

    def __init__(self, width, height, xlo, xhi, ylo, yhi, xlabel, ylabel):
        if xhi == xlo:
            xlo -= 0.5
            xhi += 0.5
        if yhi == ylo:
            ylo -= 0.5
            yhi += 0.5
        self.xlo, self.xhi, self.ylo, self.yhi = xlo, xhi, ylo, yhi
        self.px0 = MARGIN_LEFT
        self.px1 = width - MARGIN_RIGHT
        self.py0 = MARGIN_TOP
        self.py1 = height - MARGIN_BOTTOM
        self.xlabel = xlabel
        self.ylabel = ylabel
        self.height = height
        self.width = width

    def x(self, v: float) -> float:
        span = self.xhi - self.xlo
        return self.px0 + (v - self.xlo) / span * (self.px1 - self.px0)

    def y(self, v: float) -> float:
        span = self.yhi - self.ylo
        return self.py1 - (v - self.ylo) / span * (self.py1 - self.py0)

    def axes(self) -> list[str]:
        parts = [
            f'<rect x="{_f(self.px0)}" y="{_f(self.py0)}" '
            f'width="{_f(self.px1 - self.px0)}" height="{_f(self.py1 - self.py0)}" '
            f'fill="none" stroke="{AXIS_COLOR}" stroke-width="1"/>'
        ]
        for tick in _ticks(self.xlo, self.xhi):
            px = self.x(tick)
            parts.append(
                f'<line x1="{_f(px)}" y1="{_f(self.py1)}" x2="{_f(px)}" '
                f'y2="{_f(self.py1 + 4)}" stroke="{AXIS_COLOR}" stroke-width="1"/>'
            )
            parts.append(
                f'<text x="{_f(px)}" y="{_f(self.py1 + 16)}" font-family="sans-serif" '
                f'font-size="10" text-anchor="middle">{_tick_label(tick)}</text>'
            )
        for tick in _ticks(self.ylo, self.yhi):
            py = self.y(tick)
            parts.append(
                f'<line x1="{_f(self.px0 - 4)}" y1="{_f(py)}" x2="{_f(self.px0)}" '
                f'y2="{_f(py)}" stroke="{AXIS_COLOR}" stroke-width="1"/>'
            )
            parts.append(
                f'<text x="{_f(self.px0 - 6)}" y="{_f(py + 3)}" font-family="sans-serif" '
                f'font-size="10" text-anchor="end">{_tick_label(tick)}</text>'
            )
        parts.append(
            f'<text x="{_f((self.px0 + self.px1) / 2)}" y="{_f(self.py1 + 32)}" '
            f'font-family="sans-serif" font-size="11" text-anchor="middle">'
            f"{_escape(self.xlabel)}</text>"
        )
        parts.append(
            f'<text x="14" y="{_f((self.py0 + self.py1) / 2)}" '
            f'font-family="sans-serif" font-size="11" text-anchor="middle" '
            f'transform="rotate(-90 14 {_f((self.py0 + self.py1) / 2)})">'
            f"{_escape(self.ylabel)}</text>"
        )
        return parts


def line_chart_svg(
    series: list[tuple[str, list[float], list[float]]],
    title: str,
    xlabel: str,
    ylabel: str,
    width: float = 640,
    height: float = 420,
) -> str:
    """Polyline chart; series is a list of (label, xs, ys)."""
    xs_all = [x for _, xs, _ in series for x in xs]
    ys_all = [y for _, _, ys in series for y in ys]
    if not xs_all:
        raise ValueError("no points to plot")
    frame = _Frame(
        width, height, min(xs_all), max(xs_all), min(ys_all), max(ys_all),
        xlabel, ylabel,
    )
    body = [_title(title, width)]
    body += frame.axes()
    for idx, (label, xs, ys) in enumerate(series):
        color = SERIES_COLORS[idx % len(SERIES_COLORS)]
        points = " ".join(
            f"{_f(frame.x(x))},{_f(frame.y(y))}" for x, y in zip(xs, ys)
        )
        body.append(
            f'<polyline class="series" fill="none" stroke="{color}" '
            f'stroke-width="1.5" points="{points}"/>'
        )
        for x, y in zip(xs, ys):
            body.append(
                f'<circle cx="{_f(frame.x(x))}" cy="{_f(frame.y(y))}" r="2.5" '
                f'fill="{color}"/>'
            )
        if label:
            ly = MARGIN_TOP + 12 + 14 * idx
            body.append(
                f'<rect x="{_f(frame.px1 - 130)}" y="{_f(ly - 8)}" width="10" '
                f'height="10" fill="{color}"/>'
            )
            body.append(
                f'<text x="{_f(frame.px1 - 116)}" y="{_f(ly)}" '
                f'font-family="sans-serif" font-size="10">{_escape(label)}</text>'
            )
    return _document(width, height, body)


def heatmap_svg(
    matrix: np.ndarray,
    title: str,
    width: float = 560,
    height: float = 560,
) -> str:
    """Matrix cells shaded by magnitude: blue positive, red negative."""
    mat = np.asarray(matrix)
    if mat.ndim != 2 or mat.size == 0:
        raise ValueError("heatmap needs a nonempty 2-d matrix")
    rows, cols = mat.shape
    peak = float(np.abs(mat).max())
    plot_w = width - MARGIN_LEFT - MARGIN_RIGHT
    plot_h = height - MARGIN_TOP - MARGIN_BOTTOM
    cell_w = plot_w / cols
    cell_h = plot_h / rows
    body = [_title(title, width)]
    for i in range(rows):
        for j in range(cols):
            value = float(mat[i, j])
            if value == 0.0:
                continue
            share = abs(value) / peak
            level = 255 - int(round(share * 200))
            if value > 0:
                fill = f"#{level:02x}{level:02x}ff"
            else:
                fill = f"#ff{level:02x}{level:02x}"
            body.append(
                f'<rect class="cell" x="{_f(MARGIN_LEFT + j * cell_w)}" '
                f'y="{_f(MARGIN_TOP + i * cell_h)}" width="{_f(cell_w)}" '
                f'height="{_f(cell_h)}" fill="{fill}"/>'
            )
    body.append(
        f'<rect x="{_f(MARGIN_LEFT)}" y="{_f(MARGIN_TOP)}" width="{_f(plot_w)}" '
        f'height="{_f(plot_h)}" fill="none" stroke="{AXIS_COLOR}" stroke-width="1"/>'
    )
    return _document(width, height, body)


def raster_svg(
    raster: np.ndarray,
    title: str,
    width: float = 640,
    height: float = 420,
) -> str:
    """Spike raster: one mark per (step, neuron) spike."""
    mat = np.asarray(raster)
    if mat.ndim != 2 or mat.size == 0:
        raise ValueError("raster must be a nonempty 2-d matrix")
    horizon, n = mat.shape
    frame = _Frame(width, height, 1, max(horizon, 2), 0, max(n - 1, 1),
                   "step", "neuron")
    body = [_title(title, width)]
    body += frame.axes()
    mark_h = max(1.0, min(4.0, (frame.py1 - frame.py0) / max(n, 1) * 0.8))
    ts, ns = np.nonzero(mat)
    for t, i in zip(ts, ns):
        px = frame.x(int(t) + 1)
        py = frame.y(int(i))
        body.append(
            f'<rect class="spike" x="{_f(px - 0.5)}" y="{_f(py - mark_h / 2)}" '
            f'width="1.00" height="{_f(mark_h)}" fill="#222222"/>'
        )
    return _document(width, height, body)


def scatter_svg(
    points: list[tuple[float, float]],
    title: str,
    xlabel: str,
    ylabel: str,
    width: float = 480,
    height: float = 480,
) -> str:
    """Scatter of (x, y) pairs."""
    if not points:
        raise ValueError("no points to plot")
    xs = [float(x) for x, _ in points]
    ys = [float(y) for _, y in points]
    frame = _Frame(width, height, min(xs), max(xs), min(ys), max(ys),
                   xlabel, ylabel)
    body = [_title(title, width)]
    body += frame.axes()
    for x, y in zip(xs, ys):
        body.append(
            f'<circle class="pt" cx="{_f(frame.x(x))}" cy="{_f(frame.y(y))}" '
            f'r="2.00" fill="#1f6fb4" fill-opacity="0.6"/>'
        )
    return _document(width, height, body)
