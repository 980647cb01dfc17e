"""Distances in two convex model pieces glued along a segment or a point.

Piece ``S`` is a convex polygon.  Piece ``T`` is either a triangle or an
interval ``[0, length]``.  Within a piece the distance is the model
distance; across the seam it is the shortest path through the seam.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import model
from .metric import FiniteMetric
from .model import ModelPoint, Side
from .tolerance import get_tol

SCAN = 64
MAX_ITER = 200
PARAM_TOL = 1e-12


@dataclass(frozen=True)
class GluePoint:
    piece: str                       # "S" or "T"
    point: ModelPoint | float        # float only for an interval piece


def _in_convex_polygon(p: ModelPoint, verts: Sequence[ModelPoint], tol: float) -> bool:
    n = len(verts)
    if n == 1:
        return model.distance(p, verts[0]) <= tol * (1 + model.distance(p, verts[0]))
    if n == 2:
        return model.on_segment(p, verts[0], verts[1], tol)
    # interior side of each edge is the side holding the farthest other vertex
    degenerate = True
    for i in range(n):
        a, b = verts[i], verts[(i + 1) % n]
        if model.distance(a, b) <= tol:
            continue
        sds = [model.signed_distance_to_line(a, b, v) for v in verts]
        far = max(sds, key=abs)
        scale = 1 + max(model.distance(a, b), model.distance(a, p))
        if abs(far) <= tol * scale:
            continue
        degenerate = False
        sp = model.signed_distance_to_line(a, b, p)
        if sp * math.copysign(1.0, far) < -tol * scale:
            return False
    if degenerate:
        return any(model.on_segment(p, verts[i], verts[(i + 1) % n], tol) for i in range(n))
    return True


class GluedSpace:
    """Two convex pieces of the model surface identified along a seam.

    Use :meth:`along_segment` or :meth:`at_point` to build one.
    """

    def __init__(self, kappa, piece_s, piece_t, seam_s, seam_t):
        self.kappa = model.normalize_kappa(kappa)
        self.piece_s = list(piece_s)
        self.piece_t = piece_t
        self.seam_s = seam_s
        self.seam_t = seam_t

    @classmethod
    def along_segment(cls, kappa, piece_s: Sequence[ModelPoint], piece_t: Sequence[ModelPoint],
                      seam_s: tuple[ModelPoint, ModelPoint],
                      seam_t: tuple[ModelPoint, ModelPoint] | None = None,
                      check: bool = True) -> "GluedSpace":
        """Glue a triangle ``piece_t`` to the polygon ``piece_s``.

        ``seam_t`` gives the seam endpoints in the triangle's coordinates;
        by default both pieces share coordinates.
        """
        seam_t = tuple(seam_s) if seam_t is None else tuple(seam_t)
        g = cls(kappa, piece_s, list(piece_t), tuple(seam_s), seam_t)
        if check:
            g.validate()
        return g

    @classmethod
    def at_point(cls, kappa, piece_s: Sequence[ModelPoint], anchor: ModelPoint,
                 length: float, check: bool = True) -> "GluedSpace":
        """Attach the interval ``[0, length]`` to ``piece_s`` by identifying 0 with ``anchor``."""
        if length < 0:
            raise ValueError("interval length must be nonnegative")
        g = cls(kappa, piece_s, float(length), anchor, 0.0)
        if check:
            g.validate()
        return g

    @property
    def interval(self) -> bool:
        return not isinstance(self.piece_t, list)

    @property
    def point_seam(self) -> bool:
        return isinstance(self.seam_s, ModelPoint)

    def validate(self) -> None:
        tol = 1e3 * get_tol()
        for p in self.piece_s:
            if p.kappa != self.kappa:
                raise ValueError("piece S uses a different curvature")
        n = len(self.piece_s)
        if n >= 3:
            for i in range(n):
                prev, nxt = self.piece_s[i - 1], self.piece_s[(i + 1) % n]
                for j in range(n):
                    if j != i and not model.segments_intersect(self.piece_s[i], self.piece_s[j],
                                                               prev, nxt, tol):
                        raise ValueError("piece S is not convex")
        if self.point_seam:
            if not _in_convex_polygon(self.seam_s, self.piece_s, tol):
                raise ValueError("glue point is not in piece S")
            return
        u, v = self.seam_s
        ut, vt = self.seam_t
        if abs(model.distance(u, v) - model.distance(ut, vt)) > tol * (1 + model.distance(u, v)):
            raise ValueError("seam lengths differ between the pieces")
        for q in (u, v):
            if not _in_convex_polygon(q, self.piece_s, tol):
                raise ValueError("seam endpoint is not in piece S")
        for q in (ut, vt):
            if not _in_convex_polygon(q, self.piece_t, tol):
                raise ValueError("seam endpoint is not in piece T")

    def contains(self, gp: GluePoint, tol: float | None = None) -> bool:
        tol = 1e3 * get_tol() if tol is None else tol
        if gp.piece == "S":
            return isinstance(gp.point, ModelPoint) and _in_convex_polygon(gp.point, self.piece_s, tol)
        if gp.piece != "T":
            return False
        if self.interval:
            return -tol <= float(gp.point) <= self.piece_t + tol
        return isinstance(gp.point, ModelPoint) and _in_convex_polygon(gp.point, self.piece_t, tol)

    # seam parametrization

    def seam_points(self, lam: float) -> tuple[ModelPoint, ModelPoint]:
        u, v = self.seam_s
        ut, vt = self.seam_t
        return model.interpolate(u, v, lam), model.interpolate(ut, vt, lam)

    def _ambient(self, a: GluePoint, b: GluePoint) -> float:
        if a.piece == "T" and self.interval:
            return abs(float(a.point) - float(b.point))
        return model.distance(a.point, b.point)

    def _to_seam_t(self, b: GluePoint, zt) -> float:
        if self.interval:
            return float(b.point)
        return model.distance(zt, b.point)

    def through_seam(self, a: GluePoint, b: GluePoint, lam: float) -> float:
        """Length of the path from ``a`` in S to ``b`` in T through the seam point ``lam``."""
        if self.point_seam:
            return model.distance(a.point, self.seam_s) + self._to_seam_t(b, self.seam_t)
        zs, zt = self.seam_points(lam)
        return model.distance(a.point, zs) + self._to_seam_t(b, zt)


def _order(a: GluePoint, b: GluePoint) -> tuple[GluePoint, GluePoint]:
    return (a, b) if a.piece == "S" else (b, a)


def _ternary(phi, lo: float, hi: float) -> tuple[float, float]:
    best_x, best = lo, phi(lo)
    fh = phi(hi)
    if fh < best:
        best_x, best = hi, fh
    for _ in range(MAX_ITER):
        if hi - lo <= PARAM_TOL:
            break
        m1 = lo + (hi - lo) / 3
        m2 = hi - (hi - lo) / 3
        f1, f2 = phi(m1), phi(m2)
        if f1 < best:
            best_x, best = m1, f1
        if f2 < best:
            best_x, best = m2, f2
        if f1 <= f2:
            hi = m2
        else:
            lo = m1
    return best, best_x


def glued_distance(g: GluedSpace, a: GluePoint, b: GluePoint, method: str = "search") -> float:
    """Distance in the glued space.

    ``method="search"`` minimizes over the seam parameter: a coarse scan
    brackets the minimum and a ternary search refines it, with the seam
    endpoints always among the candidates.  ``method="unfold"`` reflects
    the far point across the seam line and uses the straight segment when
    it crosses the seam.
    """
    for q in (a, b):
        if not g.contains(q):
            raise ValueError(f"{q} does not lie in piece {q.piece}")
    if a.piece == b.piece:
        return g._ambient(a, b)
    a, b = _order(a, b)
    if g.point_seam or model.distance(*g.seam_s) <= get_tol():
        return g.through_seam(a, b, 0.0)
    if method == "unfold":
        return _unfolded(g, a, b)
    if method != "search":
        raise ValueError(f"unknown method {method!r}")
    phi = lambda lam: g.through_seam(a, b, lam)
    grid = [k / SCAN for k in range(SCAN + 1)]
    vals = [phi(x) for x in grid]
    k = min(range(len(vals)), key=vals.__getitem__)
    lo, hi = grid[max(k - 1, 0)], grid[min(k + 1, SCAN)]
    best, _ = _ternary(phi, lo, hi)
    return min(best, vals[0], vals[-1], vals[k])


def _unfolded(g: GluedSpace, a: GluePoint, b: GluePoint) -> float:
    u, v = g.seam_s
    ut, vt = g.seam_t
    bp = b.point
    if (ut, vt) != (u, v):
        # carry the triangle into S's coordinates, matching the seams
        q = model.frame_coordinates(bp, model.tangent_frame(ut, vt))
        bp = model.from_frame_coordinates(q, model.tangent_frame(u, v))
    tol = get_tol()
    sa = model.side_of_line(u, v, a.point, tol)
    sb = model.side_of_line(u, v, bp, tol)
    if sa != Side.ON and sa == sb:
        q = model.frame_coordinates(bp, model.tangent_frame(u, v))
        bp = model.from_frame_coordinates(model.reflect_y(q), model.tangent_frame(u, v))
    ends = min(model.distance(a.point, u) + model.distance(u, bp),
               model.distance(a.point, v) + model.distance(v, bp))
    if model.segments_intersect(u, v, a.point, bp, tol):
        return min(model.distance(a.point, bp), ends)
    return ends


def tuple_distance_matrix(g: GluedSpace, pts: Sequence[GluePoint], method: str = "search") -> FiniteMetric:
    n = len(pts)
    d = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            d[i, j] = d[j, i] = glued_distance(g, pts[i], pts[j], method)
    return FiniteMetric(d)
