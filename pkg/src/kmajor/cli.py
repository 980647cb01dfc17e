"""Command line interface.

Exit codes: 0 success, 1 a condition fails or the input is not a
quadruple space, 2 bad input or a perimeter too large for the model,
3 numerical breakdown.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path

from . import conditions, model, oracle
from .io import InputError, dumps, metric_to_dict, parse_matrix
from .majorize import ComparisonMap, MajorizeError, NumericalBreakdown, PerimeterTooLarge, majorize
from .metric import sample_model_subset, snowflake
from .render import PROJECTIONS, render_svg
from .tolerance import env_error, set_tol

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_NUMERIC = 0, 1, 2, 3
MODELS = {"plane": 0.0, "sphere": 1.0, "hyperboloid": -1.0}


@dataclass
class JobConfig:
    command: str
    input: Path | None = None
    kappa: float = 0.0
    tuple: tuple[int, ...] | None = None
    tol: float | None = None
    seed: int = 0
    out: Path | None = None
    svg: Path | None = None
    options: dict = field(default_factory=dict)


def _kappa(text: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid curvature {text!r}")
    if not math.isfinite(v):
        raise argparse.ArgumentTypeError("curvature must be finite")
    return v


def _tuple(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(s) for s in text.split(",") if s.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid tuple {text!r}; use comma-separated indices")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="kmajor", description="Curvature conditions and comparison polygons for finite metric spaces.")
    p.add_argument("--tol", type=float, help="global tolerance (default 1e-9, or KM_TOL)")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check", help="run the condition checkers on a metric")
    c.add_argument("input", type=Path)
    c.add_argument("--kappa", type=_kappa, default=0.0)
    c.add_argument("--wir", type=int, default=4, help="largest n for the Wirtinger check at kappa=0")
    c.add_argument("--out", type=Path)

    m = sub.add_parser("majorize", help="build a convex comparison polygon")
    m.add_argument("input", type=Path)
    m.add_argument("--kappa", type=_kappa, default=0.0)
    m.add_argument("--tuple", type=_tuple, help="cyclic tuple of indices (default: all points in order)")
    m.add_argument("--out", type=Path)
    m.add_argument("--svg", type=Path)
    m.add_argument("--projection", choices=PROJECTIONS, default="auto")
    m.add_argument("--size", type=int, default=480)

    s = sub.add_parser("snowflake", help="raise every distance to a power")
    s.add_argument("input", type=Path)
    s.add_argument("--alpha", type=float, required=True)
    s.add_argument("--out", type=Path)

    g = sub.add_parser("gen", help="sample a finite subset of a model surface")
    g.add_argument("--model", choices=sorted(MODELS), default="plane")
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--kappa", type=_kappa, help="curvature (default: 0, 1 or -1 by model)")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--radius", type=float)
    g.add_argument("--out", type=Path)

    v = sub.add_parser("verify", help="check a candidate comparison map against a metric")
    v.add_argument("input", type=Path)
    v.add_argument("--map", type=Path, required=True, dest="map_path")
    v.add_argument("--tuple", type=_tuple)
    v.add_argument("--out", type=Path)

    o = sub.add_parser("oracle", help="run a randomized lemma suite")
    o.add_argument("suite", choices=oracle.LEMMA_KINDS)
    o.add_argument("--kappa", type=_kappa, default=0.0)
    o.add_argument("--trials", type=int, default=1000)
    o.add_argument("--seed", type=int, default=0)
    o.add_argument("--out", type=Path)
    return p


def _emit(doc, out: Path | None) -> None:
    text = dumps(doc)
    if out is None:
        sys.stdout.write(text)
    else:
        out.write_text(text)


def check_suite(metric, kappa: float, wir_max: int = 4) -> dict:
    kappa = model.normalize_kappa(kappa)
    reports = []
    if kappa == 0:
        reports.append(conditions.boxtimes_check(metric))
    reports.append(conditions.cat4_check(metric, kappa))
    reports.append(conditions.cycl4_check(metric, kappa))
    if kappa == 0:
        for n in range(4, wir_max + 1):
            reports.append(conditions.wir_check(metric, n))
    failed = any(not r.passed for r in reports)
    return {"n": metric.n, "kappa": kappa, "verdict": "fail" if failed else "pass",
            "reports": [r.to_dict() for r in reports]}


def _cmd_check(job: JobConfig) -> int:
    metric = parse_matrix(job.input)
    doc = check_suite(metric, job.kappa, job.options["wir"])
    _emit(doc, job.out)
    return EXIT_FAIL if doc["verdict"] == "fail" else EXIT_OK


def _error_code(exc: MajorizeError) -> int:
    if isinstance(exc, PerimeterTooLarge):
        return EXIT_INPUT
    if isinstance(exc, NumericalBreakdown):
        return EXIT_NUMERIC
    return EXIT_FAIL


def _cmd_majorize(job: JobConfig) -> int:
    metric = parse_matrix(job.input)
    t = job.tuple if job.tuple else tuple(range(metric.n))
    try:
        cm = majorize(metric, t, job.kappa)
    except MajorizeError as exc:
        _emit(exc.to_dict(), job.out)
        return _error_code(exc)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    _emit(cm.to_dict(), job.out)
    if job.svg is not None:
        job.svg.write_text(render_svg(cm, job.options["projection"], job.options["size"]))
    return EXIT_OK


def _cmd_snowflake(job: JobConfig) -> int:
    metric = parse_matrix(job.input)
    try:
        out = snowflake(metric, job.options["alpha"])
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    _emit(metric_to_dict(out), job.out)
    return EXIT_OK


def _cmd_gen(job: JobConfig) -> int:
    name = job.options["model"]
    kappa = MODELS[name] if job.options["kappa"] is None else model.normalize_kappa(job.options["kappa"])
    if model.model_name(kappa) != name:
        raise InputError(f"curvature {kappa} does not belong to the {name} model")
    if job.options["n"] < 1:
        raise InputError("--n must be positive")
    try:
        metric, pts = sample_model_subset(job.options["n"], kappa, job.seed, job.options["radius"])
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    _emit(metric_to_dict(metric, kappa=kappa, model=name, seed=job.seed,
                         points=[list(p.coords) for p in pts]), job.out)
    return EXIT_OK


def _cmd_verify(job: JobConfig) -> int:
    metric = parse_matrix(job.input)
    try:
        data = json.loads(job.options["map_path"].read_text())
        cm = ComparisonMap.from_dict(data)
    except (OSError, ValueError, KeyError, TypeError) as exc:
        raise InputError(f"cannot read map: {exc}") from exc
    t = job.tuple if job.tuple else (cm.indices or tuple(range(len(cm.points))))
    try:
        rep = conditions.cycl_n_verify(metric, t, cm.points, cm.kappa)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    _emit(rep.to_dict(), job.out)
    return EXIT_OK if rep.passed else EXIT_FAIL


def _cmd_oracle(job: JobConfig) -> int:
    rep = oracle.lemma_property_suite(job.options["suite"], job.kappa, job.options["trials"], job.seed)
    _emit(rep.to_dict(), job.out)
    return EXIT_OK if rep.passed else EXIT_FAIL


COMMANDS = {"check": _cmd_check, "majorize": _cmd_majorize, "snowflake": _cmd_snowflake,
            "gen": _cmd_gen, "verify": _cmd_verify, "oracle": _cmd_oracle}


def job_from_args(args: argparse.Namespace) -> JobConfig:
    ns = vars(args).copy()
    job = JobConfig(command=ns.pop("command"), input=ns.pop("input", None),
                    tol=ns.pop("tol", None), seed=ns.pop("seed", 0) or 0,
                    out=ns.pop("out", None), svg=ns.pop("svg", None),
                    tuple=ns.pop("tuple", None))
    if job.command != "gen":
        job.kappa = ns.pop("kappa", 0.0)
    job.options = ns
    return job


def run(job: JobConfig) -> int:
    if job.tol is not None:
        if not (job.tol > 0 and math.isfinite(job.tol)):
            raise InputError("--tol must be a positive number")
        set_tol(job.tol)
    return COMMANDS[job.command](job)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    problem = env_error()
    if problem is not None:
        print(f"kmajor: error: {problem}", file=sys.stderr)
        return EXIT_INPUT
    try:
        return run(job_from_args(args))
    except InputError as exc:
        print(f"kmajor: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
