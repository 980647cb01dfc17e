"""SVG drawings of comparison polygons.

Flat maps are drawn as they are, hyperbolic maps in the Poincare disk and
spherical maps by orthographic projection from above the polygon's centroid.
Edges are sampled geodesics.  Output is plain text with fixed number
formatting, so equal inputs give byte-identical files.
"""

from __future__ import annotations

import math
from typing import Sequence

from . import model
from .model import ModelPoint

EDGE_SAMPLES = 64
PROJECTIONS = ("auto", "plane", "poincare", "orthographic")


def edge_samples(a: ModelPoint, b: ModelPoint, samples: int = EDGE_SAMPLES) -> list[ModelPoint]:
    """``samples`` equally spaced points along the geodesic from ``a`` to ``b``, endpoints included."""
    if samples < 2:
        raise ValueError("an edge needs at least two samples")
    return [model.interpolate(a, b, k / (samples - 1)) for k in range(samples)]


def _resolve(projection: str, kappa: float) -> str:
    if projection not in PROJECTIONS:
        raise ValueError(f"unknown projection {projection!r}")
    if projection == "auto":
        return "plane" if kappa == 0 else ("poincare" if kappa < 0 else "orthographic")
    if projection == "poincare" and kappa >= 0:
        raise ValueError("the Poincare disk needs negative curvature")
    if projection == "orthographic" and kappa <= 0:
        raise ValueError("orthographic projection needs positive curvature")
    if projection == "plane" and kappa != 0:
        raise ValueError("plane projection needs zero curvature")
    return projection


def _sphere_view(points: Sequence[ModelPoint]):
    # orthonormal frame with the third axis at the normalized centroid
    c = [sum(p.unit[i] for p in points) for i in range(3)]
    n = math.sqrt(sum(v * v for v in c))
    up = (0.0, 0.0, 1.0) if n < 1e-12 else tuple(v / n for v in c)
    helper = (1.0, 0.0, 0.0) if abs(up[0]) < 0.9 else (0.0, 1.0, 0.0)
    d = sum(h * u for h, u in zip(helper, up))
    e1 = tuple(h - d * u for h, u in zip(helper, up))
    m = math.sqrt(sum(v * v for v in e1))
    e1 = tuple(v / m for v in e1)
    e2 = (up[1] * e1[2] - up[2] * e1[1], up[2] * e1[0] - up[0] * e1[2], up[0] * e1[1] - up[1] * e1[0])
    return e1, e2


def project(p: ModelPoint, projection: str, view=None) -> tuple[float, float]:
    """Planar drawing coordinates of ``p``.  Disk projections land in the unit disk."""
    if projection == "plane":
        return p.coords[0], p.coords[1]
    u = p.unit
    if projection == "poincare":
        return u[0] / (1 + u[2]), u[1] / (1 + u[2])
    e1, e2 = view
    return (sum(a * b for a, b in zip(u, e1)), sum(a * b for a, b in zip(u, e2)))


def _fmt(v: float) -> str:
    s = f"{v:.3f}"
    return "0.000" if s == "-0.000" else s


def render_svg(cm, projection: str = "auto", size: int = 480) -> str:
    """SVG document showing the polygon of a :class:`ComparisonMap`."""
    pts = list(cm.points)
    if not pts:
        raise ValueError("nothing to draw")
    kappa = model.normalize_kappa(cm.kappa)
    proj = _resolve(projection, kappa)
    view = _sphere_view(pts) if proj == "orthographic" else None
    n = len(pts)
    edges = [[project(q, proj, view) for q in edge_samples(pts[i], pts[(i + 1) % n])] for i in range(n)]
    verts = [project(q, proj, view) for q in pts]

    if proj == "plane":
        xs = [x for e in edges for x, _ in e]
        ys = [y for e in edges for _, y in e]
        span = max(max(xs) - min(xs), max(ys) - min(ys), 1e-12)
        cx, cy = (max(xs) + min(xs)) / 2, (max(ys) + min(ys)) / 2
        half = 0.55 * span
    else:
        cx = cy = 0.0
        half = 1.05
    k = size / (2 * half)
    to_px = lambda x, y: (size / 2 + k * (x - cx), size / 2 - k * (y - cy))

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
        f'viewBox="0 0 {size} {size}">',
        f'<title>{model.model_name(kappa)} comparison polygon, kappa={kappa!r}, {n} vertices</title>',
        f'<rect width="{size}" height="{size}" fill="white"/>',
    ]
    if proj != "plane":
        ox, oy = to_px(0.0, 0.0)
        out.append(f'<circle class="boundary" cx="{_fmt(ox)}" cy="{_fmt(oy)}" r="{_fmt(k)}" '
                   'fill="none" stroke="#999" stroke-width="1"/>')
    for i, e in enumerate(edges):
        path = " ".join(f"{_fmt(px)},{_fmt(py)}" for px, py in (to_px(x, y) for x, y in e))
        out.append(f'<polyline class="edge" data-edge="{i}" points="{path}" fill="none" '
                   'stroke="#1f4e9c" stroke-width="1.5"/>')
    for i, (x, y) in enumerate(verts):
        px, py = to_px(x, y)
        out.append(f'<circle class="vertex" data-index="{i}" cx="{_fmt(px)}" cy="{_fmt(py)}" r="3" fill="#c0392b"/>')
        out.append(f'<text x="{_fmt(px + 5)}" y="{_fmt(py - 5)}" font-size="12" '
                   f'font-family="sans-serif">{i}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
