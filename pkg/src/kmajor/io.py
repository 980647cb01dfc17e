"""Reading distance matrices and writing deterministic JSON."""

from __future__ import annotations

import csv
import json
import math
from pathlib import Path

import numpy as np

from .metric import FiniteMetric, validate


class InputError(ValueError):
    """Malformed or invalid input; the CLI maps it to exit code 2."""


def _metric_from_rows(rows, labels=None) -> FiniteMetric:
    try:
        m = FiniteMetric(rows, labels)
    except (ValueError, TypeError) as exc:
        raise InputError(str(exc)) from exc
    bad = validate(m)
    if bad is not None:
        raise InputError(f"not a metric: {bad}")
    return m


def parse_matrix(path) -> FiniteMetric:
    """Load a metric from JSON or CSV.

    JSON holds ``{"labels": [...], "matrix": [[...]]}`` or a bare list of
    rows.  CSV starts with a row holding ``n`` followed by ``n`` rows of
    ``n`` numbers.  The result is validated.
    """
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    if path.suffix.lower() == ".json" or text.lstrip().startswith(("{", "[")):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InputError(f"{path}: invalid JSON ({exc})") from exc
        if isinstance(data, dict):
            if "matrix" not in data:
                raise InputError(f"{path}: missing 'matrix'")
            return _metric_from_rows(data["matrix"], data.get("labels"))
        if isinstance(data, list):
            return _metric_from_rows(data)
        raise InputError(f"{path}: expected an object or a list of rows")
    rows = [r for r in csv.reader(text.splitlines()) if any(c.strip() for c in r)]
    if not rows:
        raise InputError(f"{path}: empty file")
    try:
        n = int(rows[0][0])
        body = [[float(c) for c in r] for r in rows[1:]]
    except (ValueError, IndexError) as exc:
        raise InputError(f"{path}: {exc}") from exc
    if len(body) != n or any(len(r) != n for r in body):
        raise InputError(f"{path}: expected {n} rows of {n} values")
    return _metric_from_rows(body)


def _number(v: float) -> str:
    if math.isnan(v):
        return '"nan"'
    if math.isinf(v):
        return '"inf"' if v > 0 else '"-inf"'
    s = format(v, ".17g")
    if "." not in s and "e" not in s and "n" not in s:
        s += ".0"
    return s


def _encode(obj, indent, level) -> str:
    if obj is None:
        return "null"
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _number(float(obj))
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, np.ndarray):
        obj = obj.tolist()
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {_encode(v, indent, level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(isinstance(v, (int, float, np.number)) and not isinstance(v, bool) for v in obj):
            return "[" + ", ".join(_encode(v, indent, level) for v in obj) + "]"
        return "[\n" + ",\n".join(pad + _encode(v, indent, level + 1) for v in obj) + "\n" + end + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj, indent: int = 2) -> str:
    """JSON text with every float written to 17 significant digits.

    Non-finite floats become the strings ``"inf"``, ``"-inf"`` and ``"nan"``.
    """
    return _encode(obj, indent, 0) + "\n"


def metric_to_dict(m: FiniteMetric, **extra) -> dict:
    out = {"labels": list(m.labels), "matrix": m.d.tolist()}
    out.update(extra)
    return out
