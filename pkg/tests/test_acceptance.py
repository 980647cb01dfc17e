"""End-to-end acceptance checks.

Each test records one PASS/FAIL line (shown in the terminal summary) and
then asserts on it.
"""

import math
import time

import numpy as np
import pytest

from kmajor import batch, model
from kmajor.cli import main
from kmajor.conditions import (QuadrupleLabeling, boxtimes_check, boxtimes_min, boxtimes_value,
                               cat4_check, cycl4_check, cycl_n_verify, wir_check, wir_value)
from kmajor.gluing import glued_distance, tuple_distance_matrix
from kmajor.majorize import NotQuadruple, majorize
from kmajor.metric import FiniteMetric, from_points, sample_model_subset, snowflake, validate
from kmajor.oracle import (FEASIBLE_TOL, LEMMA_KINDS, boxtimes_grid_bound, boxtimes_grid_min,
                           cycl4_feasibility_batch, lemma_property_suite, seam_dense_min)

from conftest import KAPPAS, four_cycle, regular_polygon
from glued_samples import random_glued_space, random_points
from golden_cases import CASES, GOLD, expand, outputs
from test_metric import random_metric

BAND = 1e-6
SIZE = {-1.0: 1.5, 0.0: 1.0, 1.0: 0.45 * math.pi}


def _near(*reports):
    return any(r.worst_margin is not None and math.isfinite(r.worst_margin)
               and abs(r.worst_margin) <= BAND for r in reports)


def test_criterion_1_model_round_trips(verdict):
    start = time.perf_counter()
    rng = np.random.default_rng(1)
    n = 10**5
    worst = 0.0
    for kappa in KAPPAS:
        r = SIZE[kappa]
        a, b = rng.uniform(0, r, n), rng.uniform(0, r, n)
        theta = rng.uniform(0, math.pi, n)
        c = batch.hinge_third_side(a, b, theta, kappa)
        worst = max(worst, np.abs(batch.law_of_cosines_angle(a, b, c, kappa) - theta).max())
        x, y, z = (batch.from_polar(kappa, rng.uniform(0, r, n), rng.uniform(0, 2 * math.pi, n))
                   for _ in range(3))
        t = rng.uniform(0, 1, n)
        p = batch.interpolate(kappa, x, z, t)
        dxz = batch.distance(kappa, x, z)
        formula = batch.interp_distance(batch.distance(kappa, x, y), batch.distance(kappa, y, z), dxz, t, kappa)
        worst = max(worst, np.abs(formula - batch.distance(kappa, y, p)).max(),
                    np.abs(batch.distance(kappa, x, p) - t * dxz).max())
    elapsed = time.perf_counter() - start
    ok = worst <= 1e-9 and elapsed <= 10
    assert verdict(1, ok, f"max round-trip error {worst:.2e} over 3x10^5 instances in {elapsed:.1f} s")


def test_criterion_2_boxtimes_exact_vs_grid(verdict):
    start = time.perf_counter()
    rng = np.random.default_rng(2)
    outside = sign_mismatch = banded = 0
    for six in rng.uniform(0, 2, (10**4, 6)):
        exact, _ = boxtimes_min(*six)
        grid = boxtimes_grid_min(*six, 512)
        if not exact - 1e-12 <= grid <= exact + boxtimes_grid_bound(*six, 512) + 1e-12:
            outside += 1
        if abs(exact) <= BAND:
            banded += 1
        elif (exact < 0) != (grid < 0):
            sign_mismatch += 1
    elapsed = time.perf_counter() - start
    ok = outside == 0 and sign_mismatch == 0 and elapsed <= 30
    assert verdict(2, ok, f"{outside} outside bound, {sign_mismatch} sign mismatches "
                          f"({banded} in band) in {elapsed:.1f} s")


def _generic_four_point(rng):
    # uniform side lengths, rejected until the triangle inequality holds
    while True:
        d = np.zeros((4, 4))
        d[np.triu_indices(4, 1)] = rng.uniform(0.1, 1.0, 6)
        m = FiniteMetric(d + d.T)
        if validate(m) is None:
            return m


def test_criterion_3_equivalence_chain(verdict):
    rng = np.random.default_rng(3)
    metrics = [_generic_four_point(rng) for _ in range(10**4)]
    labelings = ((0, 1, 2, 3), (0, 1, 3, 2), (0, 2, 1, 3))
    rows = []
    for m in metrics:
        for quad in labelings:
            q = QuadrupleLabeling.from_metric(m, *quad)
            rows.append([q.a, q.b, q.c, q.e, q.f, q.g])
    viol, _ = cycl4_feasibility_batch(rows, 0.0, seed=3)
    feasible = (viol <= FEASIBLE_TOL).reshape(-1, 3).all(axis=1)
    disagree = banded = failing = 0
    for m, feas in zip(metrics, feasible):
        box, cyc = boxtimes_check(m), cycl4_check(m, 0.0)
        if _near(box, cyc):
            banded += 1
            continue
        failing += not box.passed
        if not box.passed == cyc.passed == bool(feas):
            disagree += 1
    ok = disagree == 0
    assert verdict(3, ok, f"{disagree} disagreements among {len(metrics) - banded} metrics "
                          f"({failing} failing, {banded} in band)")


def test_criterion_4_four_cycle_negative_control(verdict):
    m = four_cycle()
    reports = [boxtimes_check(m), cat4_check(m, 0.0), cycl4_check(m, 0.0), wir_check(m, 4)]
    all_fail = not any(r.passed for r in reports)
    q = QuadrupleLabeling.from_metric(m, 0, 1, 2, 3)
    low, (s, t) = boxtimes_min(q.a, q.b, q.c, q.e, q.f, q.g)
    at_half = boxtimes_value(q.a, q.b, q.c, q.e, q.f, q.g, 0.5, 0.5)
    try:
        majorize(m, range(4), 0.0)
        raised = False
    except NotQuadruple:
        raised = True
    ok = (all_fail and abs(low + 1) <= 1e-9 and abs(at_half + 1) <= 1e-9
          and abs(s - 0.5) <= 1e-9 and abs(t - 0.5) <= 1e-9 and raised)
    assert verdict(4, ok, f"checkers failing: {sum(not r.passed for r in reports)}/4, "
                          f"margin {low:.12f} at ({s:g}, {t:g}), NotQuadruple raised: {raised}")


def test_criterion_5_main_theorem(verdict):
    start = time.perf_counter()
    failures, worst, count = 0, 0.0, 0
    for kappa in KAPPAS:
        rng = np.random.default_rng(50 + int(kappa))
        for k in range(500):
            n = int(rng.integers(4, 11))
            m, _ = sample_model_subset(n, kappa, seed=[5, int(kappa) + 1, k])
            order = rng.permutation(n)
            rep = cycl_n_verify(m, order, majorize(m, order, kappa), kappa, 1e-8)
            count += 1
            failures += not (rep.passed and rep.details["convexity_ok"])
            worst = max(worst, rep.worst_margin / m.scale)
    elapsed = time.perf_counter() - start
    ok = failures == 0 and elapsed <= 120
    assert verdict(5, ok, f"{failures}/{count} maps failed verification, worst relative "
                          f"residual {worst:.1e}, {elapsed:.1f} s")


def test_criterion_6_snowflake_cycl_n(verdict):
    rng = np.random.default_rng(6)
    cycl4_fail = not_quad = unverified = 0
    for k in range(200):
        m = snowflake(random_metric(8, 6000 + k), 0.5)
        cycl4_fail += not cycl4_check(m, 0.0).passed
        for n in range(4, 9):
            order = [int(i) for i in rng.permutation(8)[:n]]
            try:
                cm = majorize(m, order, 0.0)
            except NotQuadruple:
                not_quad += 1
                continue
            unverified += not cycl_n_verify(m, order, cm, 0.0).passed
    ok = cycl4_fail == 0 and not_quad == 0 and unverified == 0
    assert verdict(6, ok, f"200 metrics: {cycl4_fail} fail cycl4, {not_quad} NotQuadruple, "
                          f"{unverified} unverified maps")


def test_criterion_7_gluing(verdict):
    worst, cat_fail = 0.0, 0
    for kappa in KAPPAS:
        rng = np.random.default_rng(70 + int(kappa))
        for _ in range(1000):
            g, a, b = random_glued_space(kappa, rng)
            worst = max(worst, abs(glued_distance(g, a, b) - seam_dense_min(g, a, b, 10**5)))
            quad = tuple_distance_matrix(g, random_points(g, rng, 4))
            cat_fail += not cat4_check(quad, kappa).passed
    ok = worst <= 1e-6 and cat_fail == 0
    assert verdict(7, ok, f"max |glued - dense| {worst:.1e} over 3000 spaces, {cat_fail} cat4 failures")


def test_criterion_8_lemma_suites(verdict):
    failures, skipped, worst = 0, 0, 0.0
    for kappa in KAPPAS:
        for kind in LEMMA_KINDS:
            rep = lemma_property_suite(kind, kappa, 10**4, seed=8)
            failures += rep.failures
            skipped += rep.skipped
            worst = max(worst, rep.worst)
    ok = failures == 0 and skipped == 0
    assert verdict(8, ok, f"{len(LEMMA_KINDS)} suites x 3 curvatures x 10^4 trials: "
                          f"{failures} violations, {skipped} skipped, worst excess {worst:.1e}")


def test_criterion_9_wirtinger(verdict):
    p = model.plane_point
    para = from_points([p(0, 0), p(2, 0.3), p(2.5, 1.7), p(0.5, 1.4)])
    v4 = wir_value(para, range(4), 2)
    v5 = wir_value(regular_polygon(5)[0], range(5), 2)
    sampled_fail = 0
    for seed in range(10):
        m, _ = sample_model_subset(6, 0.0, seed=900 + seed)
        sampled_fail += sum(not wir_check(m, n).passed for n in (4, 5, 6))
    ok = abs(v4) <= 1e-9 and abs(v5) <= 1e-9 and sampled_fail == 0
    assert verdict(9, ok, f"parallelogram {v4:.1e}, pentagon {v5:.1e}, "
                          f"{sampled_fail} failing Euclidean samples")


def test_criterion_10_cli_determinism(verdict, tmp_path):
    mismatched = []
    for name, (argv, code) in sorted(CASES.items()):
        for run in ("a", "b"):
            out = tmp_path / name / run
            out.mkdir(parents=True)
            if main(expand(argv, out)) != code:
                mismatched.append(f"{name} exit")
            for fname in outputs(argv):
                if (out / fname).read_bytes() != (GOLD / fname).read_bytes():
                    mismatched.append(f"{name}/{run}/{fname}")
    files = sum(len(outputs(a)) for a, _ in CASES.values())
    ok = not mismatched
    assert verdict(10, ok, f"{files} golden files x 2 runs, mismatches: {mismatched or 'none'}")
