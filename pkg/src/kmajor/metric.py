"""Finite metric spaces stored as dense distance matrices."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import model
from .model import ModelPoint
from .tolerance import get_tol


class FiniteMetric:
    """An ``n x n`` distance matrix with optional point labels.

    The matrix is copied and made read-only.  Construction checks only the
    shape; use :func:`validate` for the metric axioms.
    """

    def __init__(self, d, labels: Sequence[str] | None = None):
        arr = np.array(d, dtype=float)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise ValueError(f"distance matrix must be square, got shape {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise ValueError("distance matrix has non-finite entries")
        arr.setflags(write=False)
        self.d = arr
        if labels is None:
            labels = [str(i) for i in range(arr.shape[0])]
        labels = [str(s) for s in labels]
        if len(labels) != arr.shape[0]:
            raise ValueError("label count does not match matrix size")
        self.labels = labels

    @property
    def n(self) -> int:
        return self.d.shape[0]

    @property
    def scale(self) -> float:
        """Largest entry, or 1 for a space with all distances zero."""
        s = float(self.d.max()) if self.n else 0.0
        return s if s > 0 else 1.0

    def __len__(self) -> int:
        return self.n

    def __call__(self, i: int, j: int) -> float:
        return float(self.d[i, j])

    def __eq__(self, other) -> bool:
        return (isinstance(other, FiniteMetric) and self.labels == other.labels
                and np.array_equal(self.d, other.d))

    def __repr__(self) -> str:
        return f"FiniteMetric(n={self.n})"

    def submetric(self, indices: Sequence[int]) -> "FiniteMetric":
        idx = list(indices)
        return FiniteMetric(self.d[np.ix_(idx, idx)], [self.labels[i] for i in idx])

    def scaled(self, factor: float) -> "FiniteMetric":
        return FiniteMetric(self.d * factor, self.labels)


@dataclass(frozen=True)
class Violation:
    """Why a matrix fails to be a metric."""

    kind: str          # "diagonal", "symmetry", "negative" or "triangle"
    indices: tuple
    excess: float

    def __str__(self) -> str:
        return f"{self.kind} violation at {self.indices} (excess {self.excess:.3g})"


def validate(m: FiniteMetric) -> Violation | None:
    """Return ``None`` for a valid (pseudo)metric, else the first violation found.

    Triangle violations are reported as ``(i, j, k)`` with
    ``d(i, k) > d(i, j) + d(j, k)``.
    """
    d = m.d
    n = m.n
    if n == 0:
        return None
    tol = get_tol() * m.scale
    diag = np.abs(np.diag(d))
    if diag.max() > tol:
        i = int(diag.argmax())
        return Violation("diagonal", (i, i), float(diag[i]))
    asym = np.abs(d - d.T)
    if asym.max() > tol:
        i, j = np.unravel_index(int(asym.argmax()), asym.shape)
        i, j = sorted((int(i), int(j)))
        return Violation("symmetry", (i, j), float(asym[i, j]))
    if d.min() < -tol:
        i, j = np.unravel_index(int(d.argmin()), d.shape)
        return Violation("negative", (int(i), int(j)), float(-d[i, j]))
    # excess[i, j, k] = d(i, k) - d(i, j) - d(j, k)
    for i in range(n):
        excess = d[i][None, :] - d[i][:, None] - d
        bad = np.argwhere(excess > tol)
        if len(bad):
            j, k = (int(v) for v in bad[0])
            return Violation("triangle", (i, j, k), float(excess[j, k]))
    return None


def from_points(points: Sequence[ModelPoint]) -> FiniteMetric:
    n = len(points)
    d = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            d[i, j] = d[j, i] = model.distance(points[i], points[j])
    return FiniteMetric(d)


def snowflake(m: FiniteMetric, alpha: float) -> FiniteMetric:
    """Entrywise power ``d**alpha`` for ``0 < alpha <= 1``."""
    if not 0 < alpha <= 1:
        raise ValueError(f"alpha must lie in (0, 1], got {alpha}")
    return FiniteMetric(np.power(np.maximum(m.d, 0.0), alpha), m.labels)


def check_tuple(m: FiniteMetric, t: Sequence[int]) -> tuple[int, ...]:
    t = tuple(int(i) for i in t)
    if not t:
        raise ValueError("a cyclic tuple needs at least one entry")
    for i in t:
        if not 0 <= i < m.n:
            raise ValueError(f"index {i} out of range for a {m.n}-point space")
    return t


def perimeter(m: FiniteMetric, t: Sequence[int]) -> float:
    t = check_tuple(m, t)
    return float(sum(m.d[t[i], t[(i + 1) % len(t)]] for i in range(len(t))))


@dataclass(frozen=True)
class Collapsed:
    """A cyclic tuple with runs of coincident consecutive points merged.

    ``indices[k]`` stands for ``runs[k]`` consecutive entries of the original
    tuple; the first run starts at position ``offset`` of the original.
    """

    indices: tuple[int, ...]
    runs: tuple[int, ...]
    offset: int

    @property
    def length(self) -> int:
        return sum(self.runs)

    def expand(self, values: Sequence) -> list:
        """Spread one value per merged run back over the original positions."""
        if len(values) != len(self.indices):
            raise ValueError("one value per collapsed index is required")
        out = [None] * self.length
        pos = self.offset
        for v, r in zip(values, self.runs):
            for _ in range(r):
                out[pos % self.length] = v
                pos += 1
        return out


def dedupe_consecutive(m: FiniteMetric, t: Sequence[int], tol: float | None = None) -> Collapsed:
    """Merge cyclically consecutive entries at distance zero (within tolerance)."""
    t = check_tuple(m, t)
    tol = (get_tol() if tol is None else tol) * m.scale
    n = len(t)
    same = [t[i - 1] == t[i] or m.d[t[i - 1], t[i]] <= tol for i in range(n)]
    if all(same):
        return Collapsed((t[0],), (n,), 0)
    start = same.index(False)
    idx, runs = [], []
    for k in range(n):
        pos = (start + k) % n
        if not same[pos] or k == 0:
            idx.append(t[pos])
            runs.append(1)
        else:
            runs[-1] += 1
    return Collapsed(tuple(idx), tuple(runs), start)


def default_radius(n: int, kappa: float) -> float:
    """Sampling radius keeping every cyclic perimeter below twice the diameter."""
    kappa = model.normalize_kappa(kappa)
    if kappa > 0:
        D = model.diameter(kappa)
        return min(0.45 * D, 0.95 * D / max(n, 1))
    return 1.0 if kappa == 0 else 1.5 * model.radius(kappa)


def sample_points(n: int, kappa: float, rng: np.random.Generator,
                  radius: float | None = None) -> list[ModelPoint]:
    """``n`` points drawn uniformly by area from a disk about the base point."""
    kappa = model.normalize_kappa(kappa)
    rho = default_radius(n, kappa) if radius is None else float(radius)
    if kappa > 0 and not 0 < rho < 0.5 * model.diameter(kappa):
        raise ValueError("spherical samples must stay inside an open hemisphere")
    u = rng.random(n)
    phi = rng.random(n) * 2 * math.pi
    if kappa == 0:
        r = rho * np.sqrt(u)
    else:
        k = math.sqrt(abs(kappa))
        if kappa > 0:
            r = np.arccos(1 - u * (1 - math.cos(k * rho))) / k
        else:
            r = np.arccosh(1 + u * (math.cosh(k * rho) - 1)) / k
    return [model.from_polar(kappa, float(ri), float(pi)) for ri, pi in zip(r, phi)]


def sample_model_subset(n: int, kappa: float, seed, radius: float | None = None):
    """Random ``n``-point subset of the model surface and its metric."""
    rng = np.random.default_rng(seed)
    pts = sample_points(n, kappa, rng, radius)
    return from_points(pts), pts
