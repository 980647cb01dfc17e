"""Array versions of the model formulas for bulk evaluation.

Points are ``(..., 3)`` arrays of unit-model coordinates (see
:mod:`kmajor.model`); lengths are in the scaled model of curvature ``kappa``.
"""

from __future__ import annotations

import numpy as np

from .model import normalize_kappa
from .tolerance import get_tol


def _k(kappa):
    return 1.0 if kappa == 0 else np.sqrt(abs(kappa))


def from_polar(kappa, r, phi):
    kappa = normalize_kappa(kappa)
    r, phi = np.broadcast_arrays(np.asarray(r, float), np.asarray(phi, float))
    c, s = np.cos(phi), np.sin(phi)
    if kappa == 0:
        return np.stack([r * c, r * s, np.zeros_like(r)], axis=-1)
    kr = _k(kappa) * r
    if kappa > 0:
        sr, cr = np.sin(kr), np.cos(kr)
    else:
        sr, cr = np.sinh(kr), np.cosh(kr)
    return np.stack([sr * c, sr * s, cr], axis=-1)


def _mdot(u, v):
    return u[..., 0] * v[..., 0] + u[..., 1] * v[..., 1] - u[..., 2] * v[..., 2]


def distance(kappa, u, v):
    kappa = normalize_kappa(kappa)
    u, v = np.asarray(u, float), np.asarray(v, float)
    if kappa == 0:
        return np.hypot(u[..., 0] - v[..., 0], u[..., 1] - v[..., 1])
    if kappa > 0:
        cr = np.cross(u, v)
        d = np.arctan2(np.linalg.norm(cr, axis=-1), np.sum(u * v, axis=-1))
    else:
        dv = u - v
        d = 2.0 * np.arcsinh(0.5 * np.sqrt(np.maximum(_mdot(dv, dv), 0.0)))
    return d / _k(kappa)


def interpolate(kappa, u, v, t):
    kappa = normalize_kappa(kappa)
    u, v = np.asarray(u, float), np.asarray(v, float)
    t = np.asarray(t, float)[..., None]
    if kappa == 0:
        return (1 - t) * u + t * v
    d = (distance(kappa, u, v) * _k(kappa))[..., None]
    if kappa > 0:
        tv = v - np.sum(v * u, axis=-1, keepdims=True) * u
        n = np.linalg.norm(tv, axis=-1, keepdims=True)
        e = np.divide(tv, n, out=np.zeros_like(tv), where=n > 0)
        return np.cos(t * d) * u + np.sin(t * d) * e
    tv = v + _mdot(v, u)[..., None] * u
    n = np.sqrt(np.maximum(_mdot(tv, tv), 0.0))[..., None]
    e = np.divide(tv, n, out=np.zeros_like(tv), where=n > 0)
    return np.cosh(t * d) * u + np.sinh(t * d) * e


def _fns(kappa):
    if kappa > 0:
        return np.sin
    return np.sinh


def law_of_cosines_angle(a, b, c, kappa):
    kappa = normalize_kappa(kappa)
    a, b, c = (np.asarray(x, float) for x in (a, b, c))
    if kappa == 0:
        n1 = 0.25 * (c + a - b) * (c - a + b)
        n2 = 0.25 * (a + b + c) * (a + b - c)
    else:
        k = _k(kappa)
        f = _fns(kappa)
        sa, sb, sc = k * a, k * b, k * c
        n1 = f(0.5 * (sc + sa - sb)) * f(0.5 * (sc - sa + sb))
        n2 = f(0.5 * (sa + sb + sc)) * f(0.5 * (sa + sb - sc))
    den = n1 + n2
    bad = (den <= 0) | (n1 < -0.5 * get_tol() * den) | (n2 < -0.5 * get_tol() * den)
    if np.any(bad):
        raise ValueError("some side triples are not realizable")
    return 2.0 * np.arctan2(np.sqrt(np.maximum(n1, 0.0)), np.sqrt(np.maximum(n2, 0.0)))


def hinge_third_side(a, b, theta, kappa):
    kappa = normalize_kappa(kappa)
    a, b, theta = (np.asarray(x, float) for x in (a, b, theta))
    h = np.sin(0.5 * theta) ** 2
    if kappa == 0:
        return np.sqrt((a - b) ** 2 + 4.0 * a * b * h)
    k = _k(kappa)
    sa, sb = k * a, k * b
    if kappa > 0:
        s = np.sin(0.5 * (sa - sb)) ** 2 + np.sin(sa) * np.sin(sb) * h
        return 2.0 * np.arcsin(np.sqrt(np.clip(s, 0.0, 1.0))) / k
    s = np.sinh(0.5 * (sa - sb)) ** 2 + np.sinh(sa) * np.sinh(sb) * h
    return 2.0 * np.arcsinh(np.sqrt(np.maximum(s, 0.0))) / k


def interp_distance(dxy, dyz, dxz, t, kappa):
    kappa = normalize_kappa(kappa)
    dxy, dyz, dxz, t = (np.asarray(x, float) for x in (dxy, dyz, dxz, t))
    if kappa == 0:
        v = (1 - t) * dxy ** 2 + t * dyz ** 2 - t * (1 - t) * dxz ** 2
        return np.sqrt(np.maximum(v, 0.0))
    k = _k(kappa)
    f = _fns(kappa)
    A, B, D = k * dxy, k * dyz, k * dxz
    num = (f((1 - t) * D) * f(0.5 * A) ** 2 + f(t * D) * f(0.5 * B) ** 2
           - 2.0 * f(0.5 * D) * f(0.5 * (1 - t) * D) * f(0.5 * t * D))
    h = np.maximum(num / f(D), 0.0)
    if kappa > 0:
        return 2.0 * np.arcsin(np.sqrt(np.minimum(h, 1.0))) / k
    return 2.0 * np.arcsinh(np.sqrt(h)) / k
