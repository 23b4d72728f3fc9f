"""Deterministic figure emission."""

import numpy as np
import pytest

from intsnn.svgplot import heatmap_svg, line_chart_svg, raster_svg, scatter_svg


def test_line_chart_structure():
    svg = line_chart_svg(
        [("a", [0, 1, 2], [1.0, 3.0, 2.0]), ("b", [0, 1, 2], [2.0, 2.0, 2.0])],
        "title text", "x", "y",
    )
    assert svg.startswith("<svg ")
    assert svg.endswith("</svg>\n")
    assert svg.count('class="series"') == 2
    assert svg.count("<circle ") == 6
    assert "title text" in svg and ">x<" in svg and ">y<" in svg
    assert ">a<" in svg and ">b<" in svg  # legend labels


def test_line_chart_deterministic_and_handles_flat_series():
    args = ([("flat", [1, 2, 3], [5.0, 5.0, 5.0])], "t", "x", "y")
    first = line_chart_svg(*args)
    assert first == line_chart_svg(*args)
    assert "nan" not in first and "inf" not in first
    with pytest.raises(ValueError):
        line_chart_svg([], "t", "x", "y")


def test_heatmap_cells_and_polarity():
    svg = heatmap_svg(np.array([[4, -4], [0, 2]]), "w")
    assert svg.count('class="cell"') == 3  # zero cells are skipped
    assert 'fill="#3737ff"' in svg  # strongest positive is blue
    assert 'fill="#ff3737"' in svg  # strongest negative is red
    with pytest.raises(ValueError):
        heatmap_svg(np.empty((0, 2)), "w")


def test_raster_marks_match_spikes():
    raster = np.array([[1, 0, 0], [0, 1, 1], [0, 0, 0]])
    svg = raster_svg(raster, "spikes")
    assert svg.count('class="spike"') == 3
    quiet = raster_svg(np.zeros((4, 2), dtype=np.int64), "none")
    assert 'class="spike"' not in quiet


def test_scatter_points():
    svg = scatter_svg([(0, 0), (1, 2), (2, 1)], "s", "v(t)", "v(t+1)")
    assert svg.count('class="pt"') == 3
    assert scatter_svg([(3, 3)], "s", "a", "b").count('class="pt"') == 1
    with pytest.raises(ValueError):
        scatter_svg([], "s", "a", "b")
