"""Random glued spaces for the gluing tests."""

import math

import numpy as np

from kmajor import model
from kmajor.gluing import GluedSpace, GluePoint
from kmajor.model import Side

SIZE = {-1.0: 1.5, 0.0: 1.0, 1.0: 0.2 * math.pi}


def convex_polygon(kappa, rng, k):
    # points on a circle about the base point are in convex position
    r = SIZE[kappa] * rng.uniform(0.3, 1.0)
    phis = np.sort(rng.uniform(0, 2 * math.pi, k))
    return [model.from_polar(kappa, r, float(p)) for p in phis]


def point_in(verts, rng):
    """A point of the convex hull of ``verts`` (fan triangle, two interpolations)."""
    if len(verts) == 1:
        return verts[0]
    if len(verts) == 2:
        return model.interpolate(verts[0], verts[1], rng.random())
    i = int(rng.integers(1, len(verts) - 1))
    s, t = rng.random(2)
    return model.interpolate(model.interpolate(verts[0], verts[i], s), verts[i + 1], math.sqrt(t))


def random_glued_space(kappa, rng):
    """A polygon with a triangle or an interval glued to it, plus one point per piece."""
    kappa = float(kappa)
    S = convex_polygon(kappa, rng, int(rng.integers(3, 7)))
    if rng.random() < 0.2:
        anchor = point_in(S, rng)
        length = SIZE[kappa] * rng.uniform(0.0, 1.0)
        g = GluedSpace.at_point(kappa, S, anchor, length)
        return g, GluePoint("S", point_in(S, rng)), GluePoint("T", float(rng.uniform(0, length)))
    j = int(rng.integers(len(S)))
    u, v = S[j], S[(j + 1) % len(S)]
    L = model.distance(u, v)
    # the triangle lives in its own coordinates with the seam on the first axis
    ut, vt = model.base_point(kappa), model.from_polar(kappa, L, 0.0)
    da = SIZE[kappa] * rng.uniform(0.1, 1.0)
    db = model.hinge_third_side(L, da, rng.uniform(0.1, math.pi - 0.1), kappa)
    apex = model.place_point(ut, vt, da, db, Side.LEFT if rng.random() < 0.5 else Side.RIGHT)
    T = [ut, vt, apex]
    g = GluedSpace.along_segment(kappa, S, T, (u, v), (ut, vt))
    return g, GluePoint("S", point_in(S, rng)), GluePoint("T", point_in(T, rng))


def random_points(g, rng, count):
    out = []
    for _ in range(count):
        if rng.random() < 0.5:
            out.append(GluePoint("S", point_in(g.piece_s, rng)))
        elif g.interval:
            out.append(GluePoint("T", float(rng.uniform(0, g.piece_t))))
        else:
            out.append(GluePoint("T", point_in(g.piece_t, rng)))
    return out
