"""Process-wide numeric tolerance.

The default absolute tolerance is 1e-9.  It can be overridden with the
``KM_TOL`` environment variable (an unusable value is ignored here and
rejected by the command line), or temporarily with :func:`tolerance`.
"""

from __future__ import annotations

import math
import os
from contextlib import contextmanager

DEFAULT_TOL = 1e-9


def env_error() -> str | None:
    """Why ``KM_TOL`` is unusable, or ``None`` when it is unset or valid."""
    raw = os.environ.get("KM_TOL")
    if raw is None or raw.strip() == "":
        return None
    try:
        value = float(raw)
    except ValueError:
        return f"KM_TOL is not a number: {raw!r}"
    if not (value > 0 and math.isfinite(value)):
        return f"KM_TOL must be a positive number, got {raw!r}"
    return None


def _initial() -> float:
    if env_error() is not None:
        return DEFAULT_TOL
    raw = os.environ.get("KM_TOL", "")
    return float(raw) if raw.strip() else DEFAULT_TOL


_state = {"tol": _initial()}


def get_tol() -> float:
    return _state["tol"]


def set_tol(value: float) -> None:
    if not value > 0:
        raise ValueError("tolerance must be positive")
    _state["tol"] = float(value)


@contextmanager
def tolerance(value: float):
    """Temporarily replace the global tolerance."""
    old = _state["tol"]
    set_tol(value)
    try:
        yield
    finally:
        _state["tol"] = old
