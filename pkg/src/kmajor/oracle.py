"""Brute-force baselines and randomized lemma drivers.

Nothing here shares code paths with the analytic shortcuts it is meant to
check: grids stand in for closed-form minima, dense seam sampling stands in
for the ternary search, and a derivative-free search over model
configurations stands in for the quadruple test.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import batch, model
from .gluing import GluedSpace, GluePoint
from .model import ModelPoint, Side

FEASIBLE_TOL = 1e-7
LEMMA_TOL = 1e-8
REJECTION_CAP = 10**6


# boxtimes grid

def boxtimes_grid_min(a, b, c, e, f, g, resolution: int) -> float:
    """Minimum of the boxtimes quadratic over a ``resolution x resolution`` grid."""
    if resolution < 2:
        raise ValueError("resolution must be at least 2")
    u = np.linspace(0.0, 1.0, resolution)
    # value(t, s) = row(t) + s * slope(t) - s (1 - s) g^2, evaluated on every node
    row = (1 - u) * a * a + u * b * b - u * (1 - u) * f * f
    slope = (1 - u) * (e * e - a * a) + u * (c * c - b * b)
    val = row[:, None] + slope[:, None] * u[None, :] - (u * (1 - u) * g * g)[None, :]
    return float(val.min())


def boxtimes_grid_bound(a, b, c, e, f, g, resolution: int) -> float:
    """Upper bound on ``grid min - true min``.

    The quadratic's Hessian has spectral norm ``|H|``; every minimizer has a
    grid point within ``h / sqrt(2)`` along which the first-order term
    vanishes, so the gap is at most ``|H| h^2 / 4``.
    """
    F, G = f * f, g * g
    r = a * a - b * b + c * c - e * e
    H = np.array([[-2 * F, r], [r, -2 * G]])
    h = 1.0 / (resolution - 1)
    return float(np.linalg.norm(H, 2) * h * h / 4)


# feasibility of the four-point condition

@dataclass
class FeasibilityResult:
    feasible: bool
    points: list[ModelPoint]
    violation: float

    def to_dict(self) -> dict:
        return {"feasible": self.feasible, "violation": self.violation,
                "points": [list(p.coords) for p in self.points]}


def _configs(kappa, X):
    # X[..., 0] = position of g1 on the first axis, X[..., 1:3] and
    # X[..., 3:5] = exponential coordinates of g2 and g3 at the base point
    if kappa == 0:
        zero = np.zeros(X.shape[:-1])
        o = np.stack([zero, zero, zero], axis=-1)
        p1 = np.stack([X[..., 0], zero, zero], axis=-1)
        p2 = np.stack([X[..., 1], X[..., 2], zero], axis=-1)
        p3 = np.stack([X[..., 3], X[..., 4], zero], axis=-1)
        return o, p1, p2, p3
    # far hyperbolic points are never useful and would overflow cosh
    cap = 30.0 * model.radius(kappa) if kappa < 0 else np.inf
    rad = lambda r: np.minimum(r, cap)
    o = batch.from_polar(kappa, np.zeros(X.shape[:-1]), 0.0)
    p1 = batch.from_polar(kappa, rad(np.abs(X[..., 0])), np.where(X[..., 0] < 0, math.pi, 0.0))
    p2 = batch.from_polar(kappa, rad(np.hypot(X[..., 1], X[..., 2])), np.arctan2(X[..., 2], X[..., 1]))
    p3 = batch.from_polar(kappa, rad(np.hypot(X[..., 3], X[..., 4])), np.arctan2(X[..., 4], X[..., 3]))
    return o, p1, p2, p3


def _constraints(kappa, L, X):
    # L[..., :] = (a, b, c, e, f, g) broadcast against X[..., 5]
    if kappa == 0:
        x1, x2, y2, x3, y3 = (X[..., i] for i in range(5))
        cons = (np.abs(x1) - L[..., 0], np.hypot(x2 - x1, y2) - L[..., 1],
                np.hypot(x3 - x2, y3 - y2) - L[..., 2], np.hypot(x3, y3) - L[..., 3],
                L[..., 4] - np.hypot(x2, y2), L[..., 5] - np.hypot(x3 - x1, y3))
    else:
        o, p1, p2, p3 = _configs(kappa, X)
        dist = lambda u, v: batch.distance(kappa, u, v)
        cons = (dist(o, p1) - L[..., 0], dist(p1, p2) - L[..., 1],
                dist(p2, p3) - L[..., 2], dist(p3, o) - L[..., 3],
                L[..., 4] - dist(o, p2), L[..., 5] - dist(p1, p3))
    return cons


def _max_violation(kappa, L, X):
    cons = _constraints(kappa, L, X)
    out = cons[0]
    for c in cons[1:]:
        out = np.maximum(out, c)
    return out


def _penalty(kappa, L, X):
    # sum of squared positive parts: smooth enough for a compass search,
    # unlike the max, whose kinks stall it
    out = 0.0
    for c in _constraints(kappa, L, X):
        out = out + np.square(np.maximum(c, 0.0))
    return out


def _search(kappa, L, X, rng, iters, n_random, stop_at=None, owner=None):
    """Compass search with random extra directions over independent rows.

    Each row keeps its own step; it moves to the best improving probe and
    grows the step, otherwise it halves the step.  Rows retire once the
    step is negligible.  With ``stop_at`` set, every row of a problem
    (rows sharing an ``owner`` id) retires as soon as one of them has
    penalty at most ``stop_at``.
    """
    dim = X.shape[-1]
    X = X.copy()
    val = _penalty(kappa, L, X)
    scale = np.maximum(L.max(axis=-1), 1e-12)
    step = 0.25 * scale
    axes = np.concatenate([np.eye(dim), -np.eye(dim)])
    active = np.arange(len(X))
    for _ in range(iters):
        if stop_at is not None and owner is not None:
            done = np.unique(owner[val <= stop_at])
            active = active[~np.isin(owner[active], done)]
        active = active[step[active] >= 1e-12 * scale[active]]
        if not len(active):
            break
        rnd = rng.normal(size=(n_random, dim))
        rnd /= np.linalg.norm(rnd, axis=1, keepdims=True)
        dirs = np.concatenate([axes, rnd, -rnd])
        Xa, sa, va = X[active], step[active], val[active]
        cand = Xa[:, None, :] + sa[:, None, None] * dirs
        cv = _penalty(kappa, L[active][:, None, :], cand)
        k = cv.argmin(axis=1)
        best = cv[np.arange(len(active)), k]
        better = best < va
        idx = active[better]
        X[idx] = cand[np.arange(len(active))[better], k[better]]
        val[idx] = best[better]
        step[active] = np.where(better, sa * 1.5, sa * 0.5)
    return X, val


def _polish(kappa, L, X, iters):
    """Gauss-Newton on the nearly active constraints treated as equations.

    Constraints within ten times the current worst violation are driven to
    zero by a minimum-norm step (forward-difference Jacobian), halved until
    it lowers the worst violation.  This finishes taut
    configurations, where the feasible set is a single point and the
    compass search crawls.
    """
    X = X.copy()
    n, dim = X.shape
    cons = np.stack(_constraints(kappa, L, X), axis=-1)
    worst = cons.max(axis=-1)
    scale = np.maximum(L.max(axis=-1), 1e-12)
    eye = np.eye(dim)
    live = worst > 0
    for _ in range(iters):
        idx = np.flatnonzero(live)
        if not len(idx):
            break
        Xa, ca, wa, La = X[idx], cons[idx], worst[idx], L[idx]
        mask = ca >= -10 * wa[:, None]
        h = 1e-8 * scale[idx]
        J = np.stack([(np.stack(_constraints(kappa, La, Xa + h[:, None] * eye[i]), axis=-1) - ca)
                      / h[:, None] for i in range(dim)], axis=-1)
        J = J * mask[..., None]
        r = ca * mask
        step = -np.einsum("nij,nj->ni", np.linalg.pinv(J, rcond=1e-12), r)
        ok = np.zeros(len(idx), dtype=bool)
        for frac in 0.5 ** np.arange(12):
            Xn = Xa + frac * step
            cn = np.stack(_constraints(kappa, La, Xn), axis=-1)
            wn = cn.max(axis=-1)
            acc = ~ok & (wn < wa)
            X[idx[acc]], cons[idx[acc]], worst[idx[acc]] = Xn[acc], cn[acc], wn[acc]
            ok |= acc
            if ok.all():
                break
        live[idx[~ok]] = False
        live &= worst > 0
    return X


def _initial(kappa, L, starts, rng):
    scale = L.max(axis=-1)
    shape = (len(L), starts)
    X = rng.uniform(-1.0, 1.0, size=shape + (5,)) * scale[:, None, None]
    X[..., 0] = rng.uniform(0.0, 1.0, size=shape) * L[:, None, 0]
    if kappa > 0:
        # keep starting points well inside the open hemisphere
        lim = 0.3 * model.diameter(kappa)
        X = np.clip(X, -lim, lim)
    return X


def cycl4_feasibility_batch(lengths, kappa: float, seed=0, starts: int = 32,
                            keep: int = 4, coarse_iters: int = 40, iters: int = 600,
                            n_random: int = 4, early_stop: bool = True, chunk: int = 256,
                            polish_iters: int = 60):
    """Best violation and configuration for each row of ``lengths`` (shape ``(m, 6)``).

    All ``starts`` run a short coarse phase; the best ``keep`` per problem
    are refined and then polished.  With ``early_stop`` a problem stops its
    search once one start is within the feasibility tolerance.
    """
    kappa = model.normalize_kappa(kappa)
    L = np.asarray(lengths, dtype=float).reshape(-1, 6)
    rng = np.random.default_rng(seed)
    vals = np.empty(len(L))
    confs = np.empty((len(L), 5))
    # penalty <= tol^2 implies every constraint is within tol
    stop = FEASIBLE_TOL ** 2 if early_stop else None
    for lo in range(0, len(L), chunk):
        Lc = L[lo:lo + chunk]
        m = len(Lc)
        X = _initial(kappa, Lc, starts, rng).reshape(m * starts, 5)
        Lr = np.repeat(Lc, starts, axis=0)
        owner = np.repeat(np.arange(m), starts)
        X, val = _search(kappa, Lr, X, rng, coarse_iters, n_random, stop, owner)
        order = np.argsort(val.reshape(m, starts), axis=1)[:, :keep]
        pick = (order + np.arange(m)[:, None] * starts).ravel()
        X, val = _search(kappa, Lr[pick], X[pick], rng, iters, n_random, stop, owner[pick])
        X = _polish(kappa, Lr[pick], X, polish_iters)
        val = _max_violation(kappa, Lr[pick], X).reshape(m, keep)
        k = val.argmin(axis=1)
        vals[lo:lo + m] = val[np.arange(m), k]
        confs[lo:lo + m] = X.reshape(m, keep, 5)[np.arange(m), k]
    return vals, confs


def cycl4_feasibility_numeric(a, b, c, e, f, g, kappa: float, seed=0,
                              starts: int = 32) -> FeasibilityResult:
    """Search directly for a model quadrilateral with edges no longer than
    ``a, b, c, e`` and diagonals no shorter than ``f, g``.

    ``g0`` sits at the base point and ``g1`` on the first axis; the other two
    points are free.  Feasible iff the best max-violation is at most 1e-7.
    """
    kappa = model.normalize_kappa(kappa)
    if kappa > 0 and a + b + c + e >= 2 * model.diameter(kappa):
        raise ValueError("perimeter must be below twice the diameter")
    viol, X = cycl4_feasibility_batch([[a, b, c, e, f, g]], kappa, seed, starts, early_stop=False)
    us = _configs(kappa, X[0][None, :])
    pts = [ModelPoint.from_unit(kappa, tuple(float(v) for v in u[0])) for u in us]
    v = float(viol[0])
    return FeasibilityResult(v <= FEASIBLE_TOL, pts, v)


# dense seam sampling

def seam_dense_min(g: GluedSpace, a: GluePoint, b: GluePoint, samples: int) -> float:
    """Minimum path length through ``samples`` equispaced seam points."""
    if a.piece == b.piece:
        raise ValueError("seam_dense_min needs points in different pieces")
    if a.piece != "S":
        a, b = b, a
    if samples < 2:
        raise ValueError("at least two seam samples are required")
    kappa = g.kappa
    if g.point_seam:
        return g.through_seam(a, b, 0.0)
    lam = np.linspace(0.0, 1.0, samples)
    u, v = g.seam_s
    zs = batch.interpolate(kappa, np.array(u.unit), np.array(v.unit), lam)
    first = batch.distance(kappa, np.array(a.point.unit), zs)
    if g.interval:
        second = np.full(samples, float(b.point))
    else:
        ut, vt = g.seam_t
        zt = batch.interpolate(kappa, np.array(ut.unit), np.array(vt.unit), lam)
        second = batch.distance(kappa, np.array(b.point.unit), zt)
    return float((first + second).min())


# lemma drivers

LEMMA_KINDS = ("alexandrov_larger", "alexandrov_smaller", "crossing", "quadruple_p", "angle_calculus")


@dataclass
class SuiteReport:
    kind: str
    kappa: float
    trials: int
    seed: int
    failures: int = 0
    skipped: int = 0
    degenerate: int = 0
    worst: float = 0.0
    witnesses: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.failures == 0

    def to_dict(self) -> dict:
        return {"kind": self.kind, "kappa": self.kappa, "trials": self.trials, "seed": self.seed,
                "passed": self.passed, "failures": self.failures, "skipped": self.skipped,
                "degenerate": self.degenerate, "worst_excess": self.worst,
                "witnesses": self.witnesses}


class _Sampler:
    def __init__(self, kappa, rng):
        self.kappa = kappa
        self.rng = rng
        self.rho = (0.2 * model.diameter(kappa)) if kappa > 0 else (1.0 if kappa == 0 else 1.5 * model.radius(kappa))

    def point(self):
        u, phi = self.rng.random(), self.rng.random() * 2 * math.pi
        k = 1.0 if self.kappa == 0 else math.sqrt(abs(self.kappa))
        if self.kappa == 0:
            r = self.rho * math.sqrt(u)
        elif self.kappa > 0:
            r = math.acos(1 - u * (1 - math.cos(k * self.rho))) / k
        else:
            r = math.acosh(1 + u * (math.cosh(k * self.rho) - 1)) / k
        return model.from_polar(self.kappa, r, phi)

    def points(self, n, degenerate=False):
        pts = [self.point() for _ in range(n)]
        if degenerate:
            i = int(self.rng.integers(n))
            j = (i + int(self.rng.choice([-1, 1]))) % n
            pts[i] = pts[j]
        return pts

    def side(self):
        return Side.LEFT if self.rng.random() < 0.5 else Side.RIGHT


def _perim(pts):
    return sum(model.distance(pts[i], pts[(i + 1) % len(pts)]) for i in range(len(pts)))


def _distinct(p, q):
    return model.distance(p, q) > 0


def _trial_larger(s: _Sampler, degenerate):
    kappa = s.kappa
    x, y, z, w = s.points(4, degenerate)
    D = model.diameter(kappa)
    if _perim([x, y, z, w]) >= 2 * D:
        return None
    if all(_distinct(p, q) for p, q in ((x, y), (x, z), (x, w), (y, z), (z, w))):
        if model.angle_at(y, z, x) + model.angle_at(x, z, w) < math.pi:
            return None
        sy = model.side_of_line(x, z, y, 0.0)
        sw = model.side_of_line(x, z, w, 0.0)
        if sy != Side.ON and sy == sw:
            return None
    a, b, c, e = (model.distance(p, q) for p, q in ((x, y), (y, z), (z, w), (w, x)))
    g = model.distance(y, w)
    hi = min(a + e, b + c)
    if kappa > 0:
        hi = min(hi, 2 * D - a - e, 2 * D - b - c)
    if hi < g:
        return None
    gp = g + s.rng.random() * (hi - g)
    yp = model.base_point(kappa)
    wp = model.from_polar(kappa, gp, 0.0)
    try:
        xp = model.place_point(yp, wp, a, e, Side.LEFT)
        zp = model.place_point(yp, wp, b, c, s.side())
    except ValueError:
        return None
    excess = model.distance(x, z) - model.distance(xp, zp)
    return excess, {"unprimed": [x, y, z, w], "primed": [xp, yp, zp, wp]}


def _smaller_setup(s: _Sampler, degenerate, opposite):
    kappa = s.kappa
    D = model.diameter(kappa)
    xp, yp, zp, wp = s.points(4, degenerate)
    if _perim([xp, yp, zp, wp]) >= 2 * D:
        return None
    if not model.segments_intersect(xp, zp, yp, wp, 0.0):
        return None
    a, b, c, e = (model.distance(p, q) for p, q in ((xp, yp), (yp, zp), (zp, wp), (wp, xp)))
    fp = model.distance(xp, zp)
    hi = min(a + b, e + c)
    if kappa > 0:
        hi = min(hi, 2 * D - a - b, 2 * D - e - c)
    if hi < fp:
        return None
    f = fp + s.rng.random() * (hi - fp)
    x = model.base_point(kappa)
    z = model.from_polar(kappa, f, 0.0)
    try:
        y = model.place_point(x, z, a, b, Side.LEFT)
        w = model.place_point(x, z, e, c, Side.RIGHT if opposite else s.side())
    except ValueError:
        return None
    return (x, y, z, w), (xp, yp, zp, wp)


def _trial_smaller(s: _Sampler, degenerate):
    got = _smaller_setup(s, degenerate, opposite=False)
    if got is None:
        return None
    (x, y, z, w), (xp, yp, zp, wp) = got
    excess = model.distance(y, w) - model.distance(yp, wp)
    return excess, {"unprimed": [x, y, z, w], "primed": [xp, yp, zp, wp]}


def _crossing_gap(x, z, y, w):
    """How far ``[x, z]`` is from meeting ``[y, w]``, found by bisection.

    Locates where ``[x, z]`` crosses the line through ``y`` and ``w`` by
    bisecting the signed distance, then measures how far that point lies
    outside ``[y, w]`` along the line.  Zero means the segments meet.
    """
    if model.distance(y, w) == 0:
        return model.distance(x, y) + model.distance(y, z) - model.distance(x, z)
    h = lambda t: model.signed_distance_to_line(y, w, model.interpolate(x, z, t))
    lo, hi = 0.0, 1.0
    hl, hh = h(lo), h(hi)
    if hl * hh > 0:
        return min(abs(hl), abs(hh))
    for _ in range(200):
        if hi - lo < 1e-15:
            break
        mid = 0.5 * (lo + hi)
        hm = h(mid)
        if hm == 0:
            lo = hi = mid
            break
        if (hm > 0) == (hl > 0):
            lo, hl = mid, hm
        else:
            hi = mid
    p = model.interpolate(x, z, 0.5 * (lo + hi))
    return 0.5 * (model.distance(y, p) + model.distance(p, w) - model.distance(y, w))


def _trial_crossing(s: _Sampler, degenerate):
    got = _smaller_setup(s, degenerate, opposite=True)
    if got is None:
        return None
    (x, y, z, w), primed = got
    if model.distance(x, z) == 0:
        return None
    return _crossing_gap(x, z, y, w), {"unprimed": [x, y, z, w], "primed": list(primed)}


def _trial_quadruple_p(s: _Sampler, degenerate):
    kappa = s.kappa
    D = model.diameter(kappa)
    x, y, z, w = s.points(4, degenerate)
    a, b, c, e = (model.distance(p, q) for p, q in ((x, y), (y, z), (z, w), (w, x)))
    f = model.distance(x, z)
    grow = lambda v: v * (1 + 0.3 * s.rng.random()) if s.rng.random() < 0.7 else v
    a2, b2, c2, e2 = (grow(v) for v in (a, b, c, e))
    if kappa > 0 and a2 + b2 + c2 + e2 >= 2 * D:
        return None
    f2 = f * s.rng.random() if s.rng.random() < 0.7 else f
    xp = model.base_point(kappa)
    zp = model.from_polar(kappa, f2, 0.0)
    try:
        yp = model.place_point(xp, zp, a2, b2, Side.LEFT)
        wp = model.place_point(xp, zp, e2, c2, s.side())
    except ValueError:
        return None
    gyw = model.distance(y, w)
    excess = -math.inf
    for t in np.linspace(0.0, 1.0, 17):
        p = model.interpolate(xp, zp, float(t))
        excess = max(excess, gyw - model.distance(yp, p) - model.distance(p, wp))
    return excess, {"unprimed": [x, y, z, w], "primed": [xp, yp, zp, wp]}


def _trial_angles(s: _Sampler, degenerate):
    o = s.point()
    x, y, z = s.points(3, degenerate)
    if any(model.distance(o, q) == 0 for q in (x, y, z)):
        return None
    ang = model.angle_at
    which = int(s.rng.integers(3))
    if which == 0:
        excess = ang(x, o, z) - ang(x, o, y) - ang(y, o, z)
        tag = "additivity"
    elif which == 1:
        if ang(y, o, x) + ang(x, o, z) < math.pi:
            return None
        sy = model.side_of_line(o, x, y, 0.0)
        sz = model.side_of_line(o, x, z, 0.0)
        if sy != Side.ON and sy == sz:
            return None
        excess = abs(ang(x, o, y) + ang(y, o, z) + ang(z, o, x) - 2 * math.pi)
        tag = "full_turn"
    else:
        if not model.segments_intersect(x, z, o, y, 0.0):
            return None
        excess = abs(ang(x, o, z) - ang(x, o, y) - ang(y, o, z))
        tag = "diagonal_split"
    return excess, {"check": tag, "points": [o, x, y, z]}


_TRIALS = {
    "alexandrov_larger": _trial_larger,
    "alexandrov_smaller": _trial_smaller,
    "crossing": _trial_crossing,
    "quadruple_p": _trial_quadruple_p,
    "angle_calculus": _trial_angles,
}


def lemma_property_suite(kind: str, kappa: float, trials: int, seed=0,
                         degenerate_share: float = 0.1, max_witnesses: int = 5) -> SuiteReport:
    """Run ``trials`` random configurations satisfying the hypotheses of a
    comparison lemma and count conclusion violations beyond 1e-8.

    Configurations are drawn by rejection.  A trial whose hypotheses are
    not met within ``REJECTION_CAP`` draws is skipped and counted.  A share
    of trials merges two neighbouring points to exercise degenerate cases.
    """
    if kind not in _TRIALS:
        raise ValueError(f"unknown suite {kind!r}; expected one of {', '.join(LEMMA_KINDS)}")
    kappa = model.normalize_kappa(kappa)
    fn = _TRIALS[kind]
    rep = SuiteReport(kind, kappa, trials, int(seed))
    for i in range(trials):
        rng = np.random.default_rng([int(seed), i])
        s = _Sampler(kappa, rng)
        degenerate = rng.random() < degenerate_share
        out = None
        for _ in range(REJECTION_CAP):
            out = fn(s, degenerate)
            if out is not None:
                break
        if out is None:
            rep.skipped += 1
            continue
        rep.degenerate += int(degenerate)
        excess, config = out
        rep.worst = max(rep.worst, float(excess))
        if excess > LEMMA_TOL:
            rep.failures += 1
            if len(rep.witnesses) < max_witnesses:
                rep.witnesses.append({
                    "trial": i, "excess": float(excess),
                    **{k: ([list(p.coords) for p in v] if isinstance(v, list) else v)
                       for k, v in config.items()},
                })
    return rep
