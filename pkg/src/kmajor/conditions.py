"""Decision procedures for the curvature conditions on finite metric spaces.

Every checker returns a :class:`ConditionReport`.  Margins are signed so
that their meaning matches the inequality being tested:

* Wirtinger and boxtimes checks report the inequality's value, which must
  be nonnegative; a failing margin is negative.
* Quadruple-type checks report ``d_X(y, w) - d(y', w')``, the amount by
  which the metric diagonal exceeds its model counterpart; a failing
  margin is positive.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import model
from .metric import FiniteMetric, check_tuple
from .model import ModelPoint, Side
from .tolerance import get_tol

BOUNDARY_BAND = 1e-7
WIR_BUDGET = 10**7
VERIFY_TOL = 1e-8


class BudgetExceeded(ValueError):
    pass


@dataclass
class Witness:
    indices: tuple
    params: dict
    margin: float

    def to_dict(self) -> dict:
        return {"indices": list(self.indices), "params": dict(self.params), "margin": self.margin}


@dataclass
class ConditionReport:
    condition: str
    kappa: float
    verdict: str                    # "pass", "fail" or "exempt"
    witness: Witness | None = None
    boundary: bool = False
    worst_margin: float | None = None
    form: str | None = None
    details: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.verdict != "fail"

    def to_dict(self) -> dict:
        out = {
            "condition": self.condition,
            "kappa": self.kappa,
            "verdict": self.verdict,
            "witness": None if self.witness is None else self.witness.to_dict(),
            "boundary": self.boundary,
            "worst_margin": self.worst_margin,
        }
        if self.form is not None:
            out["form"] = self.form
        if self.details:
            out["details"] = self.details
        return out


# Wirtinger-type inequalities

def wir_value(m: FiniteMetric, t: Sequence[int], j: int) -> float:
    t = check_tuple(m, t)
    n = len(t)
    if n < 4:
        raise ValueError("Wirtinger inequalities need tuples of length at least 4")
    if not 2 <= j <= n - 2:
        raise ValueError(f"j must lie in [2, {n - 2}], got {j}")
    d = m.d
    edges = sum(d[t[i], t[(i + 1) % n]] ** 2 for i in range(n))
    chords = sum(d[t[i], t[(i + j) % n]] ** 2 for i in range(n))
    return math.sin(j * math.pi / n) ** 2 * edges - math.sin(math.pi / n) ** 2 * chords


def _wir_rows(d: np.ndarray, T: np.ndarray, n: int) -> np.ndarray:
    # values[k, j - 2] for every tuple row T[k]
    edges = np.sum(d[T, np.roll(T, -1, axis=1)] ** 2, axis=1)
    out = np.empty((len(T), n - 3))
    for j in range(2, n - 1):
        chords = np.sum(d[T, np.roll(T, -j, axis=1)] ** 2, axis=1)
        out[:, j - 2] = math.sin(j * math.pi / n) ** 2 * edges - math.sin(math.pi / n) ** 2 * chords
    return out


def wir_check(m: FiniteMetric, n: int, mode: str = "injective",
              budget: int = WIR_BUDGET) -> ConditionReport:
    """Check the Wirtinger inequalities for all maps of an ``n``-cycle into ``m``.

    ``mode`` is ``"injective"`` (distinct points only) or ``"all"`` (maps
    with repetition).
    """
    if n < 4:
        raise ValueError("n must be at least 4")
    N = m.n
    if mode == "injective":
        count = math.perm(N, n) if N >= n else 0
        gen = itertools.permutations(range(N), n)
    elif mode in ("all", "all-maps"):
        count = N ** n
        gen = itertools.product(range(N), repeat=n)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    if count * (n - 3) > budget:
        raise BudgetExceeded(f"{count * (n - 3)} evaluations exceed the budget of {budget}")
    tol = get_tol() * m.scale ** 2
    worst, witness = math.inf, None
    first_fail = None
    while True:
        chunk = list(itertools.islice(gen, 65536))
        if not chunk:
            break
        T = np.array(chunk, dtype=int)
        vals = _wir_rows(m.d, T, n)
        k, jj = np.unravel_index(int(np.argmin(vals)), vals.shape)
        if vals[k, jj] < worst:
            worst = float(vals[k, jj])
        if first_fail is None:
            bad = np.argwhere(vals < -tol)
            if len(bad):
                k, jj = (int(v) for v in bad[0])
                first_fail = (tuple(int(v) for v in T[k]), jj + 2, float(vals[k, jj]))
    if count == 0:
        return ConditionReport(f"wir{n}", 0.0, "pass", details={"maps": 0})
    verdict = "fail" if first_fail else "pass"
    if first_fail:
        idx, j, val = first_fail
        witness = Witness(idx, {"j": j}, val)
    return ConditionReport(f"wir{n}", 0.0, verdict, witness,
                           boundary=bool(abs(worst) <= BOUNDARY_BAND * m.scale ** 2),
                           worst_margin=worst, details={"maps": count, "mode": mode})


# boxtimes inequalities

def boxtimes_value(a, b, c, e, f, g, s, t) -> float:
    return ((1 - t) * (1 - s) * a * a + t * (1 - s) * b * b + t * s * c * c
            + (1 - t) * s * e * e - t * (1 - t) * f * f - s * (1 - s) * g * g)


def boxtimes_min(a, b, c, e, f, g) -> tuple[float, tuple[float, float]]:
    """Exact minimum of :func:`boxtimes_value` over ``(s, t)`` in the unit square.

    The value is the quadratic ``A + p t + q s + r t s + F t^2 + G s^2``; its
    minimum is attained at a corner, at a critical point of one of the four
    edge restrictions, or at the interior critical point.
    """
    A, B, C, E, F, G = a * a, b * b, c * c, e * e, f * f, g * g
    p = B - A - F
    q = E - A - G
    r = A - B + C - E

    cands = [(0.0, 0.0), (0.0, 1.0), (1.0, 0.0), (1.0, 1.0)]
    # edges t = 0 and t = 1 (minimize over s), s = 0 and s = 1 (minimize over t)
    if G > 0:
        for t0, lin in ((0.0, q), (1.0, q + r)):
            s0 = -lin / (2 * G)
            if 0 < s0 < 1:
                cands.append((s0, t0))
    if F > 0:
        for s0, lin in ((0.0, p), (1.0, p + r)):
            t0 = -lin / (2 * F)
            if 0 < t0 < 1:
                cands.append((s0, t0))
    det = 4 * F * G - r * r
    if det != 0:
        t0 = (-2 * G * p + r * q) / det
        s0 = (-2 * F * q + r * p) / det
        if 0 < s0 < 1 and 0 < t0 < 1:
            cands.append((s0, t0))
    best, arg = math.inf, (0.0, 0.0)
    for s0, t0 in cands:
        v = boxtimes_value(a, b, c, e, f, g, s0, t0)
        if v < best:
            best, arg = v, (s0, t0)
    return best, arg


CYCLIC_LABELINGS = ((0, 1, 2, 3), (0, 1, 3, 2), (0, 2, 1, 3))


def _sextuple(d, x, y, z, w):
    return (d[x, y], d[y, z], d[z, w], d[w, x], d[x, z], d[y, w])


def boxtimes_check(m: FiniteMetric) -> ConditionReport:
    """Check the boxtimes inequalities on every quadruple of distinct points.

    Quadruples with a repeated point satisfy the inequalities for any
    metric, and the eight relabelings preserving the pairing of diagonals
    leave the minimum unchanged, so three labelings per 4-subset suffice.
    """
    d = m.d
    tol = get_tol() * m.scale ** 2
    worst, witness = math.inf, None
    for sub in itertools.combinations(range(m.n), 4):
        for lab in CYCLIC_LABELINGS:
            x, y, z, w = (sub[i] for i in lab)
            val, (s, t) = boxtimes_min(*(float(v) for v in _sextuple(d, x, y, z, w)))
            if val < worst:
                worst = val
                witness = Witness((x, y, z, w), {"s": s, "t": t}, val)
    if witness is None:
        return ConditionReport("boxtimes", 0.0, "pass", details={"quadruples": 0})
    verdict = "fail" if worst < -tol else "pass"
    return ConditionReport("boxtimes", 0.0, verdict, witness if verdict == "fail" else None,
                           boundary=bool(abs(worst) <= BOUNDARY_BAND * m.scale ** 2),
                           worst_margin=float(worst))


# kappa-quadruple condition

@dataclass(frozen=True)
class QuadrupleLabeling:
    """Points ``(x, y, z, w)`` in cyclic order with ``x-z`` as the placed diagonal."""

    indices: tuple[int, int, int, int]
    a: float   # xy
    b: float   # yz
    c: float   # zw
    e: float   # wx
    f: float   # xz, realized exactly in the model
    g: float   # yw, compared against the model

    @classmethod
    def from_metric(cls, m: FiniteMetric, x: int, y: int, z: int, w: int) -> "QuadrupleLabeling":
        return cls((x, y, z, w), *(float(v) for v in _sextuple(m.d, x, y, z, w)))

    def other_diagonal(self) -> "QuadrupleLabeling":
        x, y, z, w = self.indices
        return QuadrupleLabeling((y, z, w, x), self.b, self.c, self.e, self.a, self.g, self.f)

    @property
    def perimeter(self) -> float:
        return self.a + self.b + self.c + self.e


def quadruple_configuration(a, b, c, e, f, kappa):
    """Model points ``x', y', z', w'`` with ``y'`` left and ``w'`` right of ``x'z'``."""
    xp = model.base_point(kappa)
    zp = model.from_polar(kappa, f, 0.0)
    yp = model.place_point(xp, zp, a, b, Side.LEFT)
    wp = model.place_point(xp, zp, e, c, Side.RIGHT)
    return xp, yp, zp, wp


def _quadruple(a, b, c, e, f, g, kappa, tol):
    # returns (verdict, margin, params)
    if kappa > 0 and a + b + c + e >= 2 * model.diameter(kappa):
        return "exempt", None, {}
    eps = tol * max(a, b, c, e, f, g, 1e-300)
    if f <= eps:
        margin = g - (a + e)
        return ("fail" if margin > eps else "pass"), margin, {"degenerate": "x=z"}
    for tri, (u, v) in (("xyz", (a, b)), ("xwz", (e, c))):
        if abs(u - v) > f + eps or f > u + v + eps or (kappa > 0 and u + v + f > 2 * model.diameter(kappa) + eps):
            return "fail", math.inf, {"unrealizable": tri}
    xp, yp, zp, wp = quadruple_configuration(a, b, c, e, f, kappa)
    if not model.segments_intersect(xp, zp, yp, wp, tol):
        return "pass", None, {"crossing": False}
    gp = model.distance(yp, wp)
    margin = g - gp
    return ("fail" if margin > eps else "pass"), margin, {"crossing": True, "model_diagonal": gp}


def quadruple_check(q: QuadrupleLabeling, kappa: float) -> ConditionReport:
    """Subembedding test for one labeled quadruple.

    ``x'`` and ``z'`` are placed at distance ``f``; ``y'`` and ``w'`` are hinged
    on opposite sides.  When the model diagonals cross, the metric diagonal
    ``g`` may not exceed ``d(y', w')``; otherwise the labeling imposes nothing.
    """
    kappa = model.normalize_kappa(kappa)
    verdict, margin, params = _quadruple(q.a, q.b, q.c, q.e, q.f, q.g, kappa, get_tol())
    w = Witness(q.indices, params, margin) if verdict == "fail" else None
    scale = max(q.a, q.b, q.c, q.e, q.f, q.g, 1e-300)
    boundary = margin is not None and math.isfinite(margin) and abs(margin) <= BOUNDARY_BAND * scale
    return ConditionReport("quadruple", kappa, verdict, w, boundary, margin, details=params)


def cat4_check(m: FiniteMetric, kappa: float) -> ConditionReport:
    """All 4-subsets, all three cyclic labelings and both diagonal choices."""
    kappa = model.normalize_kappa(kappa)
    d = m.d
    tol = get_tol()
    worst, witness = -math.inf, None
    first_fail = None
    checked = exempt = 0
    for sub in itertools.combinations(range(m.n), 4):
        for lab in CYCLIC_LABELINGS:
            x, y, z, w = (sub[i] for i in lab)
            for quad in ((x, y, z, w), (y, z, w, x)):
                six = [float(v) for v in _sextuple(d, *quad)]
                verdict, margin, params = _quadruple(*six, kappa, tol)
                checked += 1
                if verdict == "exempt":
                    exempt += 1
                    continue
                if margin is not None and margin > worst:
                    worst = margin
                    witness = Witness(quad, params, margin)
                if verdict == "fail" and first_fail is None:
                    first_fail = Witness(quad, params, margin)
    details = {"labelings": checked, "exempt": exempt}
    if first_fail is not None:
        return ConditionReport("cat4", kappa, "fail", witness, worst_margin=worst,
                               boundary=math.isfinite(worst) and abs(worst) <= BOUNDARY_BAND * m.scale,
                               details=details)
    verdict = "exempt" if checked and exempt == checked else "pass"
    worst_m = None if witness is None else worst
    return ConditionReport("cat4", kappa, verdict, None, worst_margin=worst_m,
                           boundary=worst_m is not None and abs(worst_m) <= BOUNDARY_BAND * m.scale,
                           details=details)


def cycl4_check(m: FiniteMetric, kappa: float) -> ConditionReport:
    rep = cat4_check(m, kappa)
    rep.condition = "cycl4"
    rep.form = "kappa-quadruple"
    return rep


# comparison polygons

def verify_polygon(m: FiniteMetric, t: Sequence[int], pts: Sequence[ModelPoint],
                   tol: float | None = None):
    """Edge residuals, diagonal slacks and the convexity flag of a candidate polygon.

    Returns ``(edge_residuals, diag_slacks, convexity_ok, bad_pair)`` where
    ``bad_pair`` is the first ``(i, j)`` failing the chord test, or ``None``.
    """
    t = check_tuple(m, t)
    n = len(t)
    if len(pts) != n:
        raise ValueError(f"polygon has {len(pts)} vertices for a tuple of length {n}")
    tol = VERIFY_TOL if tol is None else tol
    d = m.d
    edges = [model.distance(pts[i], pts[(i + 1) % n]) - d[t[i], t[(i + 1) % n]] for i in range(n)]
    slacks = []
    for i in range(n):
        for j in range(i + 1, n):
            if (j - i) % n in (1, n - 1):
                continue
            slacks.append(model.distance(pts[i], pts[j]) - d[t[i], t[j]])
    bad = None
    for i in range(n):
        prev, nxt = pts[(i - 1) % n], pts[(i + 1) % n]
        for j in range(n):
            if j == i:
                continue
            if not model.segments_intersect(pts[i], pts[j], prev, nxt, tol):
                bad = (i, j)
                break
        if bad:
            break
    return [float(v) for v in edges], [float(v) for v in slacks], bad is None, bad


def cycl_n_verify(m: FiniteMetric, t: Sequence[int], g, kappa: float | None = None,
                  tol: float | None = None) -> ConditionReport:
    """Check that ``g`` is a convex comparison polygon for the cyclic tuple ``t``.

    ``g`` is a sequence of model points or an object with a ``points``
    attribute.  Lengths are compared at ``tol * scale`` (default 1e-8).
    """
    pts = list(getattr(g, "points", g))
    if kappa is None:
        kappa = pts[0].kappa if pts else 0.0
    tol = VERIFY_TOL if tol is None else tol
    edges, slacks, convex, bad = verify_polygon(m, t, pts, tol)
    eps = tol * m.scale
    worst_edge = max((abs(v) for v in edges), default=0.0)
    worst_slack = min(slacks, default=0.0)
    witness = None
    if worst_edge > eps:
        i = max(range(len(edges)), key=lambda k: abs(edges[k]))
        witness = Witness((i, (i + 1) % len(edges)), {"check": "edge"}, edges[i])
    elif worst_slack < -eps:
        k = slacks.index(worst_slack)
        witness = Witness(_slack_pair(len(pts), k), {"check": "diagonal"}, worst_slack)
    elif not convex:
        witness = Witness(bad, {"check": "convexity"}, 0.0)
    verdict = "fail" if witness else "pass"
    return ConditionReport(f"cycl{len(pts)}_map", model.normalize_kappa(kappa), verdict, witness,
                           worst_margin=max(worst_edge, -worst_slack),
                           details={"edge_residuals": edges, "diag_slacks": slacks,
                                    "convexity_ok": convex})


def _slack_pair(n, k):
    for i in range(n):
        for j in range(i + 1, n):
            if (j - i) % n in (1, n - 1):
                continue
            if k == 0:
                return (i, j)
            k -= 1
    raise IndexError(k)


def midpoint_inequality_value(m: FiniteMetric, x: int, y: int, z: int, w: int) -> float:
    """Defect of the squared-distance comparison for ``y`` between ``x`` and ``z``.

    Requires ``d(x, z) = d(x, y) + d(y, z)``; with ``t = d(x, y) / d(x, z)``
    returns ``(1-t) d(x,w)^2 + t d(z,w)^2 - t(1-t) d(x,z)^2 - d(y,w)^2``.
    """
    d = m.d
    dxz = d[x, z]
    tol = get_tol() * m.scale
    if dxz <= tol:
        raise ValueError("x and z must be distinct")
    if abs(dxz - d[x, y] - d[y, z]) > tol:
        raise ValueError("y does not lie metrically between x and z")
    t = d[x, y] / dxz
    return float((1 - t) * d[x, w] ** 2 + t * d[z, w] ** 2 - t * (1 - t) * dxz ** 2 - d[y, w] ** 2)
