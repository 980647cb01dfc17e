"""Geometry of the model surfaces of constant curvature kappa.

Points live in three coordinate models, all scaled by ``R = 1/sqrt(|kappa|)``:

* ``kappa == 0``: the plane, stored as ``(x, y, 0)``;
* ``kappa > 0``: the sphere of radius ``R`` in Euclidean 3-space;
* ``kappa < 0``: the upper sheet of ``x**2 + y**2 - w**2 = -R**2`` in
  Minkowski 3-space, with the time coordinate ``w > 0`` stored last.

Internally all computations use the rescaled unit model ``u = coords / R``.
Orientation is the sign of the triple product ``det(a, b, p)`` of embedded
coordinates (the planar cross product when ``kappa == 0``); positive is
:attr:`Side.LEFT` in every model.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

from .tolerance import get_tol

FLAT_EPS = 1e-12

Vec = tuple[float, float, float]


def normalize_kappa(kappa: float) -> float:
    if kappa.__class__ is float and (kappa == 0.0 or 1e-12 <= abs(kappa) < math.inf):
        return kappa
    kappa = float(kappa)
    if not math.isfinite(kappa):
        raise ValueError(f"curvature must be finite, got {kappa}")
    return 0.0 if abs(kappa) < FLAT_EPS else kappa


def diameter(kappa: float) -> float:
    """pi/sqrt(kappa) for positive curvature, infinity otherwise."""
    kappa = normalize_kappa(kappa)
    return math.pi / math.sqrt(kappa) if kappa > 0 else math.inf


def model_name(kappa: float) -> str:
    kappa = normalize_kappa(kappa)
    if kappa == 0:
        return "plane"
    return "sphere" if kappa > 0 else "hyperboloid"


def radius(kappa: float) -> float:
    kappa = normalize_kappa(kappa)
    return 1.0 if kappa == 0 else 1.0 / math.sqrt(abs(kappa))


class Side(Enum):
    LEFT = 1
    RIGHT = -1
    ON = 0

    def opposite(self) -> "Side":
        return Side(-self.value)


# small vector helpers on plain tuples (much faster than numpy for 3-vectors)

def _add(u: Vec, v: Vec) -> Vec:
    return (u[0] + v[0], u[1] + v[1], u[2] + v[2])


def _sub(u: Vec, v: Vec) -> Vec:
    return (u[0] - v[0], u[1] - v[1], u[2] - v[2])


def _scale(s: float, u: Vec) -> Vec:
    return (s * u[0], s * u[1], s * u[2])


def _lin(s: float, u: Vec, r: float, v: Vec) -> Vec:
    return (s * u[0] + r * v[0], s * u[1] + r * v[1], s * u[2] + r * v[2])


def _dot(u: Vec, v: Vec) -> float:
    return u[0] * v[0] + u[1] * v[1] + u[2] * v[2]


def _mdot(u: Vec, v: Vec) -> float:
    return u[0] * v[0] + u[1] * v[1] - u[2] * v[2]


def _cross(u: Vec, v: Vec) -> Vec:
    return (
        u[1] * v[2] - u[2] * v[1],
        u[2] * v[0] - u[0] * v[2],
        u[0] * v[1] - u[1] * v[0],
    )


def _det(a: Vec, b: Vec, c: Vec) -> float:
    return _dot(a, _cross(b, c))


@dataclass(frozen=True)
class ModelPoint:
    """A point of the model surface for curvature ``kappa``."""

    kappa: float
    coords: Vec
    _unit: Vec = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        kappa = normalize_kappa(self.kappa)
        c = tuple(float(v) for v in self.coords)
        if len(c) == 2:
            c = (c[0], c[1], 0.0)
        if len(c) != 3 or not all(math.isfinite(v) for v in c):
            raise ValueError(f"bad coordinates {self.coords!r}")
        object.__setattr__(self, "kappa", kappa)
        object.__setattr__(self, "coords", c)
        if kappa == 0:
            if c[2] != 0.0:
                raise ValueError("planar points must have third coordinate 0")
            object.__setattr__(self, "_unit", c)
            return
        u = _scale(math.sqrt(abs(kappa)), c)
        if kappa > 0:
            err = abs(_dot(u, u) - 1.0)
        else:
            err = abs(_mdot(u, u) + 1.0)
            if u[2] <= 0:
                raise ValueError("hyperboloid points need positive time coordinate")
        if err > 1e-7 * (1.0 + _dot(u, u)):
            raise ValueError(f"point {c} is not on the {model_name(kappa)} model")
        object.__setattr__(self, "_unit", u)

    @property
    def unit(self) -> Vec:
        """Coordinates in the unit-curvature model."""
        return self._unit

    @classmethod
    def from_unit(cls, kappa: float, u: Vec) -> "ModelPoint":
        """Build from unit-model coordinates, skipping validation."""
        if kappa != 0:
            u = _renormalize(kappa, u)
            coords = _scale(1.0 / math.sqrt(abs(kappa)), u)
        else:
            u = (u[0], u[1], 0.0)
            coords = u
        p = object.__new__(cls)
        object.__setattr__(p, "kappa", kappa)
        object.__setattr__(p, "coords", coords)
        object.__setattr__(p, "_unit", u)
        return p

    def as_list(self) -> list[float]:
        return list(self.coords)


def _renormalize(kappa: float, u: Vec) -> Vec:
    # project back onto the unit model to stop rounding drift
    if kappa > 0:
        n = math.sqrt(_dot(u, u))
        return _scale(1.0 / n, u)
    if kappa < 0:
        w = math.sqrt(1.0 + u[0] * u[0] + u[1] * u[1])
        return (u[0], u[1], w)
    return u


def base_point(kappa: float) -> ModelPoint:
    """Origin, north pole or hyperboloid apex."""
    kappa = normalize_kappa(kappa)
    return ModelPoint.from_unit(kappa, (0.0, 0.0, 0.0 if kappa == 0 else 1.0))


def from_polar(kappa: float, r: float, phi: float) -> ModelPoint:
    """Point at distance ``r`` from the base point in direction ``phi``."""
    kappa = normalize_kappa(kappa)
    c, s = math.cos(phi), math.sin(phi)
    if kappa == 0:
        return ModelPoint.from_unit(0.0, (r * c, r * s, 0.0))
    k = math.sqrt(abs(kappa))
    if kappa > 0:
        sr, cr = math.sin(k * r), math.cos(k * r)
    else:
        sr, cr = math.sinh(k * r), math.cosh(k * r)
    return ModelPoint.from_unit(kappa, (sr * c, sr * s, cr))


def plane_point(x: float, y: float) -> ModelPoint:
    return ModelPoint(0.0, (x, y, 0.0))


def _same_kappa(*pts: ModelPoint) -> float:
    k = pts[0].kappa
    for p in pts[1:]:
        if p.kappa != k:
            raise ValueError(f"curvature mismatch: {k} vs {p.kappa}")
    return k


def _unit_distance(kappa: float, u: Vec, v: Vec) -> float:
    if kappa == 0:
        return math.hypot(u[0] - v[0], u[1] - v[1])
    if kappa > 0:
        cr = _cross(u, v)
        return math.atan2(math.sqrt(_dot(cr, cr)), _dot(u, v))
    dv = _sub(u, v)
    chord2 = max(_mdot(dv, dv), 0.0)
    return 2.0 * math.asinh(0.5 * math.sqrt(chord2))


def distance(p: ModelPoint, q: ModelPoint) -> float:
    """Geodesic distance."""
    kappa = _same_kappa(p, q)
    d = _unit_distance(kappa, p.unit, q.unit)
    return d if kappa == 0 else d / math.sqrt(abs(kappa))


# tangent-space helpers at a point o of the unit model

def _tangent(kappa: float, o: Vec, x: Vec) -> Vec:
    if kappa == 0:
        return _sub(x, o)
    if kappa > 0:
        return _lin(1.0, x, -_dot(x, o), o)
    return _lin(1.0, x, _mdot(x, o), o)


def _tdot(kappa: float, v: Vec, w: Vec) -> float:
    return _mdot(v, w) if kappa < 0 else _dot(v, w)


def _tnorm(kappa: float, v: Vec) -> float:
    return math.sqrt(max(_tdot(kappa, v, v), 0.0))


def _twedge(kappa: float, o: Vec, v: Vec, w: Vec) -> float:
    if kappa == 0:
        return v[0] * w[1] - v[1] * w[0]
    return _det(o, v, w)


def _left_normal(kappa: float, o: Vec, e1: Vec) -> Vec:
    if kappa == 0:
        return (-e1[1], e1[0], 0.0)
    n = _cross(o, e1)
    if kappa > 0:
        return n
    jn = (n[0], n[1], -n[2])
    return _scale(1.0 / math.sqrt(max(_mdot(jn, jn), 1e-300)), jn)


def _exp(kappa: float, o: Vec, v: Vec, r: float) -> Vec:
    # v a unit tangent vector at o, r a unit-model length
    if kappa == 0:
        return _lin(1.0, o, r, v)
    if kappa > 0:
        return _lin(math.cos(r), o, math.sin(r), v)
    return _lin(math.cosh(r), o, math.sinh(r), v)


def tangent_frame(o: ModelPoint, toward: ModelPoint) -> tuple[Vec, Vec, Vec]:
    """Orthonormal frame ``(o, e1, e2)`` at ``o`` in the unit model.

    ``e1`` points along the geodesic to ``toward`` and ``e2`` to its left.
    """
    kappa = _same_kappa(o, toward)
    ou = o.unit
    t = _tangent(kappa, ou, toward.unit)
    n = _tnorm(kappa, t)
    if n == 0:
        raise ValueError("frame direction is degenerate")
    e1 = _scale(1.0 / n, t)
    return ou, e1, _left_normal(kappa, ou, e1)


def frame_coordinates(p: ModelPoint, frame: tuple[Vec, Vec, Vec]) -> ModelPoint:
    """Image of ``p`` under the isometry taking ``frame`` to the standard frame."""
    kappa = p.kappa
    o, e1, e2 = frame
    u = p.unit
    if kappa == 0:
        d = _sub(u, o)
        return ModelPoint.from_unit(0.0, (_dot(d, e1), _dot(d, e2), 0.0))
    if kappa > 0:
        return ModelPoint.from_unit(kappa, (_dot(u, e1), _dot(u, e2), _dot(u, o)))
    return ModelPoint.from_unit(kappa, (_mdot(u, e1), _mdot(u, e2), -_mdot(u, o)))


def from_frame_coordinates(q: ModelPoint, frame: tuple[Vec, Vec, Vec]) -> ModelPoint:
    """Inverse of :func:`frame_coordinates`."""
    kappa = q.kappa
    o, e1, e2 = frame
    x, y, w = q.unit
    if kappa == 0:
        return ModelPoint.from_unit(0.0, _add(o, _lin(x, e1, y, e2)))
    return ModelPoint.from_unit(kappa, _add(_scale(w, o), _lin(x, e1, y, e2)))


def reflect_y(p: ModelPoint) -> ModelPoint:
    x, y, w = p.unit
    return ModelPoint.from_unit(p.kappa, (x, -y, w))


# law of cosines in half-angle form

def _half_sq_diff(kappa: float, x: float, y: float) -> float:
    # S(x) - S(y) where S(x) = x^2/4, sin^2(x/2) or sinh^2(x/2)
    if kappa == 0:
        return 0.25 * (x + y) * (x - y)
    if kappa > 0:
        return math.sin(0.5 * (x + y)) * math.sin(0.5 * (x - y))
    return math.sinh(0.5 * (x + y)) * math.sinh(0.5 * (x - y))


def _scaled(kappa: float, *lengths: float) -> tuple[float, ...]:
    if kappa == 0:
        return lengths
    k = math.sqrt(abs(kappa))
    return tuple(k * v for v in lengths)


def _check_legs(kappa: float, a: float, b: float) -> None:
    D = diameter(kappa)
    if not (a > 0 and b > 0):
        raise ValueError(f"side lengths must be positive, got {a}, {b}")
    if kappa > 0 and (a >= D or b >= D):
        raise ValueError(f"side lengths must be below the diameter {D}")


def law_of_cosines_angle(a: float, b: float, c: float, kappa: float) -> float:
    """Angle between sides ``a`` and ``b`` of a model triangle with third side ``c``."""
    kappa = normalize_kappa(kappa)
    _check_legs(kappa, a, b)
    sa, sb, sc = _scaled(kappa, a, b, c)
    n1 = _half_sq_diff(kappa, sc, sa - sb)
    n2 = _half_sq_diff(kappa, sa + sb, sc)
    den = n1 + n2
    tol = get_tol()
    if den <= 0 or n1 < -0.5 * tol * den or n2 < -0.5 * tol * den:
        raise ValueError(f"side lengths ({a}, {b}, {c}) are not realizable")
    return 2.0 * math.atan2(math.sqrt(max(n1, 0.0)), math.sqrt(max(n2, 0.0)))


def hinge_third_side(a: float, b: float, theta: float, kappa: float) -> float:
    """Length of the side opposite an angle ``theta`` between sides ``a`` and ``b``."""
    kappa = normalize_kappa(kappa)
    _check_legs(kappa, a, b)
    if not -1e-12 <= theta <= math.pi + 1e-12:
        raise ValueError(f"angle {theta} outside [0, pi]")
    h = math.sin(0.5 * theta) ** 2
    if kappa == 0:
        return math.sqrt((a - b) ** 2 + 4.0 * a * b * h)
    k = math.sqrt(abs(kappa))
    sa, sb = k * a, k * b
    if kappa > 0:
        s = math.sin(0.5 * (sa - sb)) ** 2 + math.sin(sa) * math.sin(sb) * h
        return 2.0 * math.asin(math.sqrt(min(max(s, 0.0), 1.0))) / k
    s = math.sinh(0.5 * (sa - sb)) ** 2 + math.sinh(sa) * math.sinh(sb) * h
    return 2.0 * math.asinh(math.sqrt(max(s, 0.0))) / k


def triangle_realizable(a: float, b: float, c: float, kappa: float) -> bool:
    try:
        eps = get_tol() * (1 + max(a, b, c))
        if min(a, b) <= eps:
            return abs(a - b) <= c + eps and c <= a + b + eps
        law_of_cosines_angle(a, b, c, kappa)
    except ValueError:
        return False
    return True


def interp_distance(dxy: float, dyz: float, dxz: float, t: float, kappa: float) -> float:
    """Distance from y to the point at fraction ``t`` along the segment from x to z."""
    kappa = normalize_kappa(kappa)
    if not dxz > 0:
        raise ValueError("endpoints of the segment must differ")
    if not -1e-12 <= t <= 1 + 1e-12:
        raise ValueError(f"fraction {t} outside [0, 1]")
    if dxy > 0 and not triangle_realizable(dxz, dxy, dyz, kappa):
        raise ValueError(f"({dxy}, {dyz}, {dxz}) is not a realizable triangle")
    if kappa == 0:
        v = (1 - t) * dxy * dxy + t * dyz * dyz - t * (1 - t) * dxz * dxz
        return math.sqrt(max(v, 0.0))
    k = math.sqrt(abs(kappa))
    A, B, D = k * dxy, k * dyz, k * dxz
    if kappa > 0:
        if D >= math.pi:
            raise ValueError("segment length must be below the diameter")
        f, g = math.sin, lambda x: math.sin(0.5 * x) ** 2
    else:
        f, g = math.sinh, lambda x: math.sinh(0.5 * x) ** 2
    num = (f((1 - t) * D) * g(A) + f(t * D) * g(B)
           - 2.0 * f(0.5 * D) * f(0.5 * (1 - t) * D) * f(0.5 * t * D))
    h = max(num / f(D), 0.0)
    if kappa > 0:
        return 2.0 * math.asin(math.sqrt(min(h, 1.0))) / k
    return 2.0 * math.asinh(math.sqrt(h)) / k


def angle_at(x: ModelPoint, o: ModelPoint, z: ModelPoint) -> float:
    """Interior angle at ``o`` of the geodesic hinge ``x-o-z``."""
    kappa = _same_kappa(x, o, z)
    ou = o.unit
    v = _tangent(kappa, ou, x.unit)
    w = _tangent(kappa, ou, z.unit)
    if _tnorm(kappa, v) == 0 or _tnorm(kappa, w) == 0:
        raise ValueError("angle undefined at a coincident vertex")
    return math.atan2(abs(_twedge(kappa, ou, v, w)), _tdot(kappa, v, w))


def interpolate(x: ModelPoint, z: ModelPoint, t: float) -> ModelPoint:
    """Point at fraction ``t`` of the way from ``x`` to ``z`` along the geodesic."""
    kappa = _same_kappa(x, z)
    xu, zu = x.unit, z.unit
    if kappa == 0:
        return ModelPoint.from_unit(0.0, _lin(1 - t, xu, t, zu))
    d = _unit_distance(kappa, xu, zu)
    if d == 0:
        return x
    if kappa > 0 and d >= math.pi - get_tol():
        raise ValueError("antipodal points have no unique geodesic")
    tv = _tangent(kappa, xu, zu)
    n = _tnorm(kappa, tv)
    if n == 0:
        return x
    return ModelPoint.from_unit(kappa, _exp(kappa, xu, _scale(1.0 / n, tv), t * d))


def signed_distance_to_line(a: ModelPoint, b: ModelPoint, p: ModelPoint) -> float:
    """Signed distance from ``p`` to the geodesic line through ``a`` and ``b``.

    Positive on the left of the direction from ``a`` to ``b``.
    """
    kappa = _same_kappa(a, b, p)
    au, bu, pu = a.unit, b.unit, p.unit
    if kappa == 0:
        ex, ey = bu[0] - au[0], bu[1] - au[1]
        n = math.hypot(ex, ey)
        if n == 0:
            raise ValueError("line through coincident points")
        return (ex * (pu[1] - au[1]) - ey * (pu[0] - au[0])) / n
    nv = _cross(au, bu)
    if kappa > 0:
        nn = math.sqrt(_dot(nv, nv))
        if nn < 1e-15:
            raise ValueError("line through coincident or antipodal points")
        s = _dot(pu, nv) / nn
        return math.asin(min(max(s, -1.0), 1.0)) / math.sqrt(kappa)
    nn2 = nv[0] * nv[0] + nv[1] * nv[1] - nv[2] * nv[2]
    if nn2 <= 0:
        raise ValueError("line through coincident points")
    s = _dot(pu, nv) / math.sqrt(nn2)
    return math.asinh(s) / math.sqrt(-kappa)


def side_of_line(a: ModelPoint, b: ModelPoint, p: ModelPoint, tol: float | None = None) -> Side:
    tol = get_tol() if tol is None else tol
    if distance(a, b) <= 0:
        raise ValueError("line through coincident points")
    sd = signed_distance_to_line(a, b, p)
    scale = max(distance(a, b), distance(a, p), distance(b, p))
    if abs(sd) <= tol * (1.0 + scale):
        return Side.ON
    return Side.LEFT if sd > 0 else Side.RIGHT


def on_segment(p: ModelPoint, a: ModelPoint, b: ModelPoint, tol: float | None = None) -> bool:
    """Whether ``p`` lies on the closed segment from ``a`` to ``b`` (within tolerance)."""
    tol = get_tol() if tol is None else tol
    dab, dap, dbp = distance(a, b), distance(a, p), distance(b, p)
    eps = tol * (1.0 + max(dab, dap, dbp))
    if dap <= eps or dbp <= eps:
        return True
    if dab <= eps:
        return False
    if abs(signed_distance_to_line(a, b, p)) > eps:
        return False
    return dap <= dab + eps and dbp <= dab + eps


def segments_intersect(x: ModelPoint, z: ModelPoint, y: ModelPoint, w: ModelPoint,
                       tol: float | None = None) -> bool:
    """Whether the closed segments ``[x, z]`` and ``[y, w]`` meet.

    Decided by the convex-quadrilateral angle criterion: the angle sums at
    ``x`` and at ``z`` are at most pi and ``y``, ``w`` are not strictly on the
    same side of the line through ``x`` and ``z``.
    """
    tol = get_tol() if tol is None else tol
    kappa = _same_kappa(x, z, y, w)
    dxy, dyz, dzw, dwx = distance(x, y), distance(y, z), distance(z, w), distance(w, x)
    if kappa > 0 and dxy + dyz + dzw + dwx > 2 * diameter(kappa) + tol:
        raise ValueError("quadrilateral perimeter must be below twice the diameter")
    dxz = distance(x, z)
    scale = max(dxy, dyz, dzw, dwx, dxz)
    eps = tol * (1.0 + scale)
    if dxz <= eps:
        return on_segment(x, y, w, tol)
    if min(dxy, dyz, dzw, dwx) <= eps:
        return True
    if angle_at(y, x, z) + angle_at(z, x, w) > math.pi + tol:
        return False
    if angle_at(y, z, x) + angle_at(x, z, w) > math.pi + tol:
        return False
    sy = side_of_line(x, z, y, tol)
    sw = side_of_line(x, z, w, tol)
    return not (sy == sw and sy != Side.ON)


def place_point(a: ModelPoint, b: ModelPoint, da: float, db: float, side: Side) -> ModelPoint:
    """Point at distance ``da`` from ``a`` and ``db`` from ``b`` on the given side of ``ab``."""
    kappa = _same_kappa(a, b)
    dab = distance(a, b)
    tol = get_tol()
    eps = tol * (1.0 + max(dab, da, db))
    if dab <= eps:
        raise ValueError("cannot place relative to coincident points")
    if abs(da - db) > dab + eps or dab > da + db + eps:
        raise ValueError(f"distances ({da}, {db}) are not realizable over a base of {dab}")
    if kappa > 0 and (da >= diameter(kappa) or db >= diameter(kappa)):
        raise ValueError("distances must be below the diameter")
    if da <= eps:
        return a
    if db <= eps:
        return b
    theta = law_of_cosines_angle(da, dab, db, kappa)
    if side == Side.ON:
        if min(theta, math.pi - theta) > 1e3 * tol:
            raise ValueError("only a degenerate triangle can be placed on the line")
        sign = 0.0
    else:
        sign = float(side.value)
    o, e1, e2 = tangent_frame(a, b)
    v = _lin(math.cos(theta), e1, sign * math.sin(theta), e2)
    r = da if kappa == 0 else da * math.sqrt(abs(kappa))
    return ModelPoint.from_unit(kappa, _exp(kappa, o, v, r))


def exp_point(o: ModelPoint, toward: ModelPoint, r: float, theta: float = 0.0) -> ModelPoint:
    """Point at distance ``r`` from ``o``, rotated by ``theta`` from the direction of ``toward``."""
    kappa = o.kappa
    ou, e1, e2 = tangent_frame(o, toward)
    v = _lin(math.cos(theta), e1, math.sin(theta), e2)
    rr = r if kappa == 0 else r * math.sqrt(abs(kappa))
    return ModelPoint.from_unit(kappa, _exp(kappa, ou, v, rr))
