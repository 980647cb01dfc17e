"""Convex comparison polygons for cyclic tuples.

Given a cyclic tuple ``f(0), ..., f(N-1)`` in a finite metric space, build
points ``g(0), ..., g(N-1)`` of the model surface such that

* consecutive distances are equal: ``d(g(i), g(i+1)) = d(f(i), f(i+1))``;
* all other distances do not shrink: ``d(g(i), g(j)) >= d(f(i), f(j))``;
* the polygon is convex: for ``i != j`` the chord ``[g(i), g(j)]`` meets
  ``[g(i-1), g(i+1)]``.

The construction is inductive.  A polygon for the first ``N-1`` points is
extended by a hinged triangle on the far side of its closing edge.  When
the result is not convex, the polygon and the triangle are glued along that
edge, the problem is solved for the glued space with one point fewer, and
the long edge is split again.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Sequence

import numpy as np

from . import model
from .conditions import CYCLIC_LABELINGS, QuadrupleLabeling, VERIFY_TOL, _quadruple, verify_polygon
from .gluing import GluedSpace, GluePoint, glued_distance
from .metric import FiniteMetric, check_tuple, dedupe_consecutive, perimeter
from .model import ModelPoint, Side
from .tolerance import get_tol


class MajorizeError(Exception):
    kind = "MajorizeError"

    def to_dict(self) -> dict:
        return {"error": self.kind, "message": str(self)}


class PerimeterTooLarge(MajorizeError):
    kind = "PerimeterTooLarge"


class NotQuadruple(MajorizeError):
    """The input violates the quadruple condition; ``witness`` holds the indices."""

    kind = "NotQuadruple"

    def __init__(self, message: str, witness: tuple | None = None, margin: float | None = None):
        super().__init__(message)
        self.witness = witness
        self.margin = margin

    def to_dict(self) -> dict:
        out = super().to_dict()
        out["witness"] = None if self.witness is None else list(self.witness)
        out["margin"] = self.margin
        return out


class NumericalBreakdown(MajorizeError):
    kind = "NumericalBreakdown"

    def __init__(self, message: str, step: str = ""):
        super().__init__(message)
        self.step = step

    def to_dict(self) -> dict:
        out = super().to_dict()
        out["step"] = self.step
        return out


@dataclass
class ComparisonMap:
    kappa: float
    points: list[ModelPoint]
    edge_residuals: list[float] = field(default_factory=list)
    diag_slacks: list[float] = field(default_factory=list)
    convexity_ok: bool = True
    indices: tuple[int, ...] = ()

    def to_dict(self) -> dict:
        flat = self.kappa == 0
        return {
            "kappa": self.kappa,
            "model": model.model_name(self.kappa),
            "tuple": list(self.indices),
            "points": [[float(x) for x in (p.coords[:2] if flat else p.coords)] for p in self.points],
            "edge_residuals": list(self.edge_residuals),
            "diag_slacks": list(self.diag_slacks),
            "convexity_ok": self.convexity_ok,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ComparisonMap":
        kappa = model.normalize_kappa(data["kappa"])
        pts = [ModelPoint(kappa, tuple(float(v) for v in c) + ((0.0,) if len(c) == 2 else ()))
               for c in data["points"]]
        return cls(kappa, pts, list(data.get("edge_residuals", [])),
                   list(data.get("diag_slacks", [])), bool(data.get("convexity_ok", True)),
                   tuple(data.get("tuple", range(len(pts)))))


class _Unrealizable(Exception):
    pass


class _Builder:
    """One run of the inductive construction on a distance matrix."""

    def __init__(self, kappa: float, top: int, scale: float, shortcuts: bool):
        self.kappa = kappa
        self.top = top
        self.eps = get_tol() * scale
        self.tol = get_tol()
        self.shortcuts = shortcuts
        self.calls = 0
        self.max_depth = 0

    def place(self, a, b, da, db, side):
        try:
            return model.place_point(a, b, da, db, side)
        except ValueError as exc:
            raise _Unrealizable(str(exc)) from exc

    def build(self, dm: np.ndarray, depth: int = 0, prefix: list | None = None) -> list[ModelPoint]:
        self.calls += 1
        self.max_depth = max(self.max_depth, depth)
        if depth > self.top or self.calls > 2 ** self.top:
            raise NumericalBreakdown("recursion exceeded its bound", step=f"depth {depth}")
        N = len(dm)
        kappa = self.kappa
        base = model.base_point(kappa)
        if N == 1:
            return [base]
        second = model.from_polar(kappa, dm[0, 1], 0.0)
        if N == 2:
            return [base, second]
        if N == 3:
            return [base, second, self.place(base, second, dm[0, 2], dm[1, 2], Side.LEFT)]
        n = N - 1
        if dm[n - 1, 0] <= self.eps:
            return self._tail(dm, depth)
        if prefix is not None and self.shortcuts:
            g0 = list(prefix)
        else:
            g0 = self.build(dm[:n, :n], depth + 1)
        p = self._far_point(g0, dm[n - 1, n], dm[n, 0])
        g = g0 + [p]
        if self._case_one(g):
            return g
        return self._case_two(g0, p, dm, depth)

    def _far_point(self, g0, d_last, d_first):
        a, b = g0[-1], g0[0]
        far = max((model.signed_distance_to_line(a, b, v) for v in g0), key=abs)
        band = self.tol * (1 + model.distance(a, b))
        side = Side.LEFT if far < -band else Side.RIGHT
        return self.place(a, b, d_last, d_first, side)

    def _case_one(self, g) -> bool:
        n = len(g) - 1
        p, last, first = g[n], g[n - 1], g[0]
        return (model.segments_intersect(p, g[n - 2], last, first, self.tol)
                and model.segments_intersect(p, g[1], last, first, self.tol))

    def _case_two(self, g0, p, dm, depth):
        n = len(g0)
        excess_last = (model.angle_at(g0[n - 2], g0[n - 1], g0[0])
                       + model.angle_at(g0[0], g0[n - 1], p))
        excess_first = (model.angle_at(g0[1], g0[0], g0[n - 1])
                        + model.angle_at(g0[n - 1], g0[0], p))
        if excess_last >= excess_first:
            return self._split(g0, p, depth)
        # mirror: relabel m -> (N - 2 - m) mod N, which swaps the two ends of
        # the closing edge and fixes the new point
        N = n + 1
        sigma = [(N - 2 - m) % N for m in range(N)]
        g = self._split([g0[sigma[m]] for m in range(n)], p, depth)
        return [g[sigma[m]] for m in range(N)]

    def _split(self, g0, p, depth):
        # glue the triangle (g0[-1], p, g0[0]) to conv(g0) along [g0[-1], g0[0]]
        n = len(g0)
        space = GluedSpace.along_segment(self.kappa, g0, [g0[n - 1], p, g0[0]],
                                         (g0[n - 1], g0[0]), check=False)
        tip = GluePoint("T", p)
        dm1 = np.zeros((n, n))
        for i in range(n - 1):
            for j in range(i + 1, n - 1):
                dm1[i, j] = dm1[j, i] = model.distance(g0[i], g0[j])
            dm1[i, n - 1] = dm1[n - 1, i] = glued_distance(space, GluePoint("S", g0[i]), tip,
                                                           method="unfold")
        g1 = self.build(dm1, depth + 1, prefix=g0[:n - 1])
        return g1[:n - 1] + [self._cut(g1[n - 2], g1[n - 1], model.distance(g0[n - 2], g0[n - 1])),
                             g1[n - 1]]

    def _tail(self, dm, depth):
        # f(n-1) = f(0): hang an interval of length d(f(n-1), f(n)) at g(0)
        N = len(dm)
        n = N - 1
        gt = self.build(dm[:n - 1, :n - 1], depth + 1)
        length = dm[n - 1, n]
        dm1 = np.zeros((n, n))
        for i in range(n - 1):
            for j in range(i + 1, n - 1):
                dm1[i, j] = dm1[j, i] = model.distance(gt[i], gt[j])
            dm1[i, n - 1] = dm1[n - 1, i] = model.distance(gt[i], gt[0]) + length
        g1 = self.build(dm1, depth + 1, prefix=gt)
        return g1[:n - 1] + [self._cut(g1[n - 2], g1[n - 1], model.distance(gt[n - 2], gt[0])),
                             g1[n - 1]]

    def _cut(self, a, b, length):
        # point on [a, b] at the given distance from a
        total = model.distance(a, b)
        if length > total + max(self.eps, 1e3 * self.tol * (1 + total)):
            raise NumericalBreakdown("split point falls beyond the edge", step="split")
        if total <= 0:
            return a
        return model.interpolate(a, b, min(max(length / total, 0.0), 1.0))


def _tuple_matrix(m: FiniteMetric, t: Sequence[int]) -> np.ndarray:
    idx = list(t)
    return np.array(m.d[np.ix_(idx, idx)], dtype=float)


def find_quadruple_witness(m: FiniteMetric, t: Sequence[int], kappa: float):
    """First labeled quadruple of the tuple's points failing the quadruple test."""
    pts = sorted(set(t))
    tol = get_tol()
    for sub in combinations(pts, 4):
        for lab in CYCLIC_LABELINGS:
            x, y, z, w = (sub[i] for i in lab)
            for quad in ((x, y, z, w), (y, z, w, x)):
                q = QuadrupleLabeling.from_metric(m, *quad)
                verdict, margin, _ = _quadruple(q.a, q.b, q.c, q.e, q.f, q.g, kappa, tol)
                if verdict == "fail":
                    return quad, margin
    return None, None


def canonicalize(cm: ComparisonMap) -> ComparisonMap:
    """Move ``g(0)`` to the base point, the next distinct vertex onto the
    positive first axis, and the polygon to the left of that axis."""
    pts = list(cm.points)
    if not pts:
        return cm
    kappa = cm.kappa
    o = pts[0]
    scale = max((model.distance(o, q) for q in pts), default=0.0)
    eps = get_tol() * (1 + scale)
    toward = next((q for q in pts if model.distance(o, q) > eps), None)
    if toward is None:
        new = [model.base_point(kappa) for _ in pts]
    else:
        frame = model.tangent_frame(o, toward)
        base = model.base_point(kappa)
        # copies of g(0) go exactly to the base point rather than near it
        new = [base if q.coords == o.coords else model.frame_coordinates(q, frame) for q in pts]
        axis = next(q for q in new if model.distance(base, q) > eps)
        for q in new:
            sd = model.signed_distance_to_line(base, axis, q)
            if abs(sd) > eps:
                if sd < 0:
                    new = [model.reflect_y(v) for v in new]
                break
    return ComparisonMap(kappa, new, cm.edge_residuals, cm.diag_slacks, cm.convexity_ok, cm.indices)


def _finish(m, t, pts, kappa, tol):
    cm = canonicalize(ComparisonMap(kappa, pts, indices=tuple(t)))
    edges, slacks, convex, _ = verify_polygon(m, t, cm.points, tol)
    cm.edge_residuals, cm.diag_slacks, cm.convexity_ok = edges, slacks, convex
    eps = tol * m.scale
    ok = (convex and all(abs(v) <= eps for v in edges) and all(v >= -eps for v in slacks))
    if ok and kappa > 0:
        D = model.diameter(kappa)
        ok = all(model.distance(a, b) < D for a in cm.points for b in cm.points)
    return cm, ok


def comparison_map(D: FiniteMetric, order: Sequence[int], kappa: float,
                   tol: float = VERIFY_TOL) -> ComparisonMap:
    """Convex comparison polygon for a tuple with distinct consecutive points.

    Raises :class:`PerimeterTooLarge`, :class:`NotQuadruple` or
    :class:`NumericalBreakdown`.  The result is checked at ``tol * scale``
    before it is returned.
    """
    kappa = model.normalize_kappa(kappa)
    t = check_tuple(D, order)
    if kappa > 0 and perimeter(D, t) >= 2 * model.diameter(kappa):
        raise PerimeterTooLarge(f"perimeter {perimeter(D, t)} is not below {2 * model.diameter(kappa)}")
    dm = _tuple_matrix(D, t)
    N = len(t)
    eps = get_tol() * D.scale
    for i in range(N):
        if N > 1 and dm[i, (i + 1) % N] <= eps:
            raise ValueError(f"consecutive entries {i} and {(i + 1) % N} coincide")
    failure = None
    for shortcuts in (True, False):
        builder = _Builder(kappa, N, D.scale, shortcuts)
        try:
            pts = builder.build(dm)
        except _Unrealizable as exc:
            failure = str(exc)
            continue
        except NumericalBreakdown as exc:
            failure = str(exc)
            continue
        cm, ok = _finish(D, t, pts, kappa, tol)
        if ok:
            return cm
        failure = "verification failed"
    quad, margin = find_quadruple_witness(D, t, kappa)
    if quad is not None:
        raise NotQuadruple(f"quadruple {quad} violates the comparison condition", quad, margin)
    raise NumericalBreakdown(f"construction did not verify: {failure}", step="verification")


def majorize(m: FiniteMetric, t: Sequence[int], kappa: float,
             tol: float = VERIFY_TOL) -> ComparisonMap:
    """Comparison polygon for any cyclic tuple, repeated points allowed."""
    kappa = model.normalize_kappa(kappa)
    t = check_tuple(m, t)
    if kappa > 0 and perimeter(m, t) >= 2 * model.diameter(kappa):
        raise PerimeterTooLarge(f"perimeter {perimeter(m, t)} is not below {2 * model.diameter(kappa)}")
    col = dedupe_consecutive(m, t)
    if len(col.indices) == 1:
        pts = [model.base_point(kappa)] * len(t)
    else:
        pts = col.expand(comparison_map(m, col.indices, kappa, tol).points)
    cm, ok = _finish(m, t, pts, kappa, tol)
    if not ok:
        raise NumericalBreakdown("re-expanded polygon did not verify", step="expand")
    return cm
