import re

import pytest

from kmajor import model
from kmajor.majorize import comparison_map
from kmajor.metric import sample_model_subset
from kmajor.render import edge_samples, project, render_svg

from conftest import unit_square


def _circles(svg):
    return [(float(x), float(y)) for x, y in
            re.findall(r'class="vertex" data-index="\d+" cx="([-\d.]+)" cy="([-\d.]+)"', svg)]


def test_square_svg():
    cm = comparison_map(unit_square(), range(4), 0.0)
    svg = render_svg(cm)
    assert svg.startswith("<?xml") and svg.rstrip().endswith("</svg>")
    pts = _circles(svg)
    assert len(pts) == 4
    xs = sorted({round(x, 3) for x, _ in pts})
    ys = sorted({round(y, 3) for _, y in pts})
    assert len(xs) == 2 and len(ys) == 2      # axis aligned
    assert svg.count('class="edge"') == 4


def test_hyperbolic_vertices_inside_disk():
    m, _ = sample_model_subset(6, -1.0, seed=2)
    cm = comparison_map(m, range(6), -1.0)
    for p in cm.points:
        x, y = project(p, "poincare")
        assert x * x + y * y < 1
    svg = render_svg(cm)
    assert 'class="boundary"' in svg


def test_sphere_uses_orthographic_view():
    m, _ = sample_model_subset(5, 1.0, seed=2)
    cm = comparison_map(m, range(5), 1.0)
    svg = render_svg(cm)
    assert "sphere comparison polygon" in svg and len(_circles(svg)) == 5
    with pytest.raises(ValueError):
        render_svg(cm, projection="poincare")
    with pytest.raises(ValueError):
        render_svg(cm, projection="bogus")


def test_edge_samples_follow_geodesics():
    for kappa in (-1.0, 0.0, 1.0):
        a, b = model.from_polar(kappa, 0.7, 0.2), model.from_polar(kappa, 0.9, 2.0)
        pts = edge_samples(a, b)
        assert len(pts) == 64
        assert pts[0] == a
        for k, p in enumerate(pts):
            assert p.coords == pytest.approx(model.interpolate(a, b, k / 63).coords, abs=1e-15)
            assert model.distance(a, p) == pytest.approx(k / 63 * model.distance(a, b), abs=1e-12)


def test_render_deterministic():
    m, _ = sample_model_subset(7, -1.0, seed=5)
    cm = comparison_map(m, range(7), -1.0)
    assert render_svg(cm) == render_svg(cm)
    assert "-0.000" not in render_svg(cm)
