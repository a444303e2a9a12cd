"""SVG rendering: structure, determinism, and contour fidelity.

The renderer is checked by inverting its pixel transform: path
endpoints pulled back to data coordinates must lie close to the zero
set of the curve they claim to trace.
"""

import dataclasses
import re
from fractions import Fraction
from statistics import median

import pytest

from conftest import U, V, W, X, Y, fitness_map, pancake_map, square_map
from flatimage.boundary import (BoundaryDiagnostics, BoundaryPair,
                                FlatteningProblem)
from flatimage.regions import flatten_report
from flatimage.svgplot import render_svg

WINDOW = (Fraction(-7, 10), Fraction(12, 10), Fraction(-7, 20), Fraction(7, 20))

# canvas constants the renderer commits to
W_, H_, M_ = 800, 600, 40


@pytest.fixture(scope="module")
def fitness_report():
    f, g = fitness_map()
    return flatten_report(FlatteningProblem(f, g), 600, 7)


@pytest.fixture(scope="module")
def fitness_svg(fitness_report):
    return render_svg(fitness_report, WINDOW, 128).decode()


def path_points(svg: str, color: str, window):
    """Data-coordinate endpoints of every segment drawn in `color`."""
    match = re.search(r'<path [^>]*stroke="%s"[^>]*d="([^"]*)"' % color, svg)
    assert match, f"no path with stroke {color}"
    xmin, xmax, ymin, ymax = (float(c) for c in window)
    sx = (W_ - 2 * M_) / (xmax - xmin)
    sy = (H_ - 2 * M_) / (ymax - ymin)
    nums = [float(t) for t in re.findall(r"-?\d+\.?\d*", match.group(1))]
    pts = []
    for i in range(0, len(nums), 2):
        pts.append((xmin + (nums[i] - M_) / sx,
                    ymin + (H_ - M_ - nums[i + 1]) / sy))
    return pts


class TestStructure:
    def test_preamble_and_layers(self, fitness_svg):
        assert fitness_svg.startswith('<?xml version="1.0"')
        assert 'version="1.1"' in fitness_svg
        assert fitness_svg.count("<path ") == 2
        assert fitness_svg.rstrip().endswith("</svg>")

    def test_deterministic_bytes(self, fitness_report):
        a = render_svg(fitness_report, WINDOW, 128)
        b = render_svg(fitness_report, WINDOW, 128)
        assert a == b

    def test_all_critical_lines_drawn(self, fitness_svg):
        # six critical values, all inside the window
        assert fitness_svg.count("<line ") == 6

    def test_interior_scatter_count(self, fitness_report, fitness_svg):
        group = re.search(r'<g fill="#d62728">(.*?)</g>', fitness_svg,
                          re.DOTALL).group(1)
        assert group.count("<circle") == \
            fitness_report.samples_used["interior"]

    def test_boundary_scatter_present(self, fitness_svg):
        group = re.search(r'<g fill="#1f77b4">(.*?)</g>', fitness_svg,
                          re.DOTALL).group(1)
        assert group.count("<circle") > 500


class TestContours:
    def test_p_contour_traces_the_cusp_curve(self, fitness_svg):
        pts = path_points(fitness_svg, "#7b3294", WINDOW)
        assert pts
        residues = sorted(abs(x ** 3 - 27 * y ** 2) for x, y in pts)
        assert residues[-1] < 0.2
        assert median(residues) < 0.02

    def test_q_contour_stays_on_the_image_frame(self, fitness_svg):
        # the image is contained in -1/2 <= x <= 1; past x ~ 0.89 the
        # two arcs of q pinch closer than one grid cell and the contour
        # legitimately ends, so the reach assertion stops at 0.85
        pts = path_points(fitness_svg, "#008837", WINDOW)
        assert pts
        assert all(-0.55 <= x <= 1.02 for x, _ in pts)
        assert any(x < -0.4 for x, _ in pts)
        assert any(x > 0.85 for x, _ in pts)

    def test_exact_zeros_on_grid_nodes(self):
        # contour a curve whose zero set runs straight through grid
        # nodes; the exact recheck must keep it pinned there
        f, g = square_map()
        rep = flatten_report(FlatteningProblem(f, g), 200, 3)
        axes = BoundaryPair(p=X * Y, q=X ** 2 + Y ** 2 - 4,
                            diagnostics=BoundaryDiagnostics())
        rep = dataclasses.replace(rep, boundary=axes)
        svg = render_svg(rep, (-1, 1, -1, 1), 64).decode()
        pts = path_points(svg, "#7b3294", (-1, 1, -1, 1))
        assert any(abs(x) < 0.01 and abs(y) > 0.5 for x, y in pts)
        assert any(abs(y) < 0.01 and abs(x) > 0.5 for x, y in pts)


class TestPancake:
    def test_renders_without_boundary_scatter(self):
        f, g = pancake_map()
        rep = flatten_report(FlatteningProblem(f, g, mode="pancake"), 500, 7)
        svg = render_svg(rep, (-1.2, 1.2, -1.2, 1.2), 96).decode()
        group = re.search(r'<g fill="#1f77b4">(.*?)</g>', svg,
                          re.DOTALL).group(1)
        assert group.count("<circle") == 0
        assert svg.count("<path ") == 2


class TestValidation:
    def test_resolution_floor(self, fitness_report):
        with pytest.raises(ValueError, match="at least 64"):
            render_svg(fitness_report, WINDOW, 63)

    def test_inverted_window(self, fitness_report):
        with pytest.raises(ValueError, match="positive width"):
            render_svg(fitness_report, (2, 1, 0, 1), 64)

    def test_window_excluding_all_samples(self, fitness_report):
        with pytest.raises(ValueError, match="excludes all samples"):
            render_svg(fitness_report, (50, 60, 50, 60), 64)
