import math

import numpy as np
import pytest

from kmajor import oracle
from kmajor.conditions import QuadrupleLabeling, boxtimes_min, quadruple_check
from kmajor.gluing import GluedSpace, GluePoint
from kmajor.model import plane_point
from kmajor.oracle import (boxtimes_grid_bound, boxtimes_grid_min, cycl4_feasibility_batch,
                           cycl4_feasibility_numeric, lemma_property_suite, seam_dense_min)

from conftest import KAPPAS
from test_metric import random_metric

R2 = math.sqrt(2)
SQUARE = (1, 1, 1, 1, R2, R2)
CYCLE = (1, 1, 1, 1, 2, 2)


def test_grid_examples():
    v = boxtimes_grid_min(*SQUARE, 512)
    assert 0 <= v <= 1e-5
    assert boxtimes_grid_min(*CYCLE, 512) <= -0.999
    corners = min(a * a for a in SQUARE[:4])
    assert boxtimes_grid_min(*SQUARE, 2) == corners
    with pytest.raises(ValueError):
        boxtimes_grid_min(*SQUARE, 1)


def test_grid_bound_brackets_exact_minimum():
    rng = np.random.default_rng(0)
    for six in rng.uniform(0, 2, (300, 6)):
        exact, _ = boxtimes_min(*six)
        grid = boxtimes_grid_min(*six, 64)
        assert exact - 1e-12 <= grid <= exact + boxtimes_grid_bound(*six, 64) + 1e-12


def test_feasibility_examples():
    sq = cycl4_feasibility_numeric(*SQUARE, 0.0)
    assert sq.feasible and sq.violation <= 1e-7
    assert len(sq.points) == 4
    cyc = cycl4_feasibility_numeric(*CYCLE, 0.0)
    assert not cyc.feasible and cyc.violation > 0.05
    # taut: points 0, 1, 2, 1.5 on a line, so f = a + b and e = g + c
    taut = cycl4_feasibility_numeric(1, 1, 0.5, 1.5, 2, 0.5, 0.0)
    assert taut.feasible


def test_feasibility_collinear_degenerate():
    # the quadruple 0, 1, 2, 1 on a line: diagonal f = a + b
    res = cycl4_feasibility_numeric(1.0, 1.0, 1.0, 1.0, 2.0, 0.0, 0.0)
    assert res.feasible


def test_feasibility_rejects_long_perimeter():
    with pytest.raises(ValueError):
        cycl4_feasibility_numeric(1.6, 1.6, 1.6, 1.6, 2, 2, 1.0)


@pytest.mark.parametrize("kappa", KAPPAS)
def test_feasibility_agrees_with_quadruple_test(kappa):
    # the labeling test decides each sextuple; the numeric search must agree off the band
    rng = np.random.default_rng(int(kappa) + 50)
    rows, verdicts = [], []
    for seed in rng.integers(0, 10**6, 80):
        m = random_metric(4, int(seed)).scaled(0.8)
        for quad in ((0, 1, 2, 3), (0, 1, 3, 2), (0, 2, 1, 3)):
            q = QuadrupleLabeling.from_metric(m, *quad)
            a, b = quad_verdict(q, kappa)
            if b:
                continue
            rows.append([q.a, q.b, q.c, q.e, q.f, q.g])
            verdicts.append(a)
    vals, _ = cycl4_feasibility_batch(rows, kappa, seed=1)
    assert list(vals <= oracle.FEASIBLE_TOL) == verdicts
    assert 0 < sum(verdicts) < len(verdicts)


def quad_verdict(q, kappa):
    """(feasible, ambiguous) for one labeled sextuple by the two-diagonal test."""
    r1 = quadruple_check(q, kappa)
    r2 = quadruple_check(q.other_diagonal(), kappa)
    ok = r1.passed and r2.passed
    near = any(r.worst_margin is not None and math.isfinite(r.worst_margin) and abs(r.worst_margin) < 1e-6
               for r in (r1, r2))
    return ok, near


def test_seam_dense_examples():
    S = [plane_point(0, 0), plane_point(1, 0), plane_point(0.5, 1)]
    T = [plane_point(0, 0), plane_point(1, 0), plane_point(0.5, -1)]
    g = GluedSpace.along_segment(0.0, S, T, (S[0], S[1]))
    a, b = GluePoint("S", S[2]), GluePoint("T", T[2])
    assert seam_dense_min(g, a, b, 10**5) == pytest.approx(2.0, abs=1e-6)
    assert seam_dense_min(g, a, b, 2) == pytest.approx(2 * math.hypot(0.5, 1))
    with pytest.raises(ValueError):
        seam_dense_min(g, a, a, 10)


@pytest.mark.parametrize("kind", oracle.LEMMA_KINDS)
@pytest.mark.parametrize("kappa", KAPPAS)
def test_lemma_suites_small(kind, kappa):
    rep = lemma_property_suite(kind, kappa, 300, seed=3)
    assert rep.passed, rep.to_dict()
    assert rep.skipped == 0
    assert rep.degenerate > 0


def test_lemma_suite_deterministic():
    a = lemma_property_suite("crossing", 1.0, 50, seed=9).to_dict()
    b = lemma_property_suite("crossing", 1.0, 50, seed=9).to_dict()
    assert a == b
    with pytest.raises(ValueError):
        lemma_property_suite("nope", 0.0, 1)
