import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from kmajor import model
from kmajor.conditions import cycl4_check, cycl_n_verify
from kmajor.majorize import (ComparisonMap, NotQuadruple, PerimeterTooLarge, _Builder, canonicalize,
                             comparison_map, majorize)
from kmajor.metric import FiniteMetric, from_points, perimeter, sample_model_subset, snowflake
from kmajor.model import plane_point

from conftest import KAPPAS, four_cycle, regular_polygon
from test_metric import random_metric


def pairwise(points):
    return np.array([[model.distance(a, b) for b in points] for a in points])


def assert_verified(m, t, cm, tol=1e-8):
    rep = cycl_n_verify(m, t, cm.points, cm.kappa, tol)
    assert rep.passed, rep.to_dict()


def test_convex_pentagon_is_reproduced():
    m, pts = regular_polygon(5)
    cm = comparison_map(m, range(5), 0.0)
    assert np.allclose(pairwise(cm.points), pairwise(pts), atol=1e-12)
    assert max(map(abs, cm.edge_residuals)) < 1e-12
    assert max(map(abs, cm.diag_slacks)) < 1e-12
    assert cm.convexity_ok


def test_non_convex_quadrilateral():
    p = plane_point
    m = from_points([p(0, 0), p(1, 0), p(1, 1), p(0.9, 0.5)])
    cm = comparison_map(m, range(4), 0.0)
    assert cm.convexity_ok
    assert max(map(abs, cm.edge_residuals)) < 1e-9
    assert min(cm.diag_slacks) >= -1e-9
    assert_verified(m, range(4), cm)


def test_three_four_five_triangle():
    m = FiniteMetric([[0, 3, 5], [3, 0, 4], [5, 4, 0]])
    cm = comparison_map(m, range(3), 0.0)
    assert np.allclose(pairwise(cm.points), m.d, atol=1e-12)
    a, b, c = cm.points
    assert model.angle_at(a, b, c) == pytest.approx(math.pi / 2, abs=1e-12)


@pytest.mark.parametrize("kappa", KAPPAS)
@pytest.mark.parametrize("seed", range(8))
def test_samples_majorize_in_every_order(kappa, seed):
    n = 4 + seed % 6
    m, _ = sample_model_subset(n, kappa, seed=100 + seed)
    order = np.random.default_rng(seed).permutation(n)
    cm = comparison_map(m, order, kappa)
    assert_verified(m, order, cm)
    if kappa > 0:
        assert pairwise(cm.points).max() < model.diameter(kappa)


def test_hemisphere_six_points():
    m, _ = sample_model_subset(6, 1.0, seed=6)
    cm = comparison_map(m, range(6), 1.0)
    assert_verified(m, range(6), cm, tol=1e-8)


def test_four_cycle_is_not_quadruple():
    with pytest.raises(NotQuadruple) as err:
        comparison_map(four_cycle(), range(4), 0.0)
    assert tuple(sorted(err.value.witness)) == (0, 1, 2, 3)
    assert err.value.margin == pytest.approx(2.0, abs=1e-6)
    assert err.value.to_dict()["error"] == "NotQuadruple"


def test_perimeter_too_large():
    m, _ = regular_polygon(4, radius=1.2)
    with pytest.raises(PerimeterTooLarge):
        majorize(m, range(4), 1.0)
    with pytest.raises(PerimeterTooLarge):
        comparison_map(m, range(4), 1.0)


def test_zero_edges_rejected_by_comparison_map():
    m = FiniteMetric([[0, 1, 1], [1, 0, 1], [1, 1, 0]])
    with pytest.raises(ValueError):
        comparison_map(m, [0, 0, 1], 0.0)


def test_repeated_entries():
    m = FiniteMetric([[0, 3, 5], [3, 0, 4], [5, 4, 0]])
    cm = majorize(m, [0, 0, 1, 2], 0.0)
    assert len(cm.points) == 4
    assert cm.points[0] == cm.points[1]
    assert_verified(m, [0, 0, 1, 2], cm)
    cm = majorize(m, [2, 2, 2], 0.0)
    assert all(p == cm.points[0] for p in cm.points)
    cm = majorize(m, [0, 1, 0, 2, 2], 0.0)
    assert_verified(m, [0, 1, 0, 2, 2], cm)


@pytest.mark.parametrize("seed", range(10))
def test_snowflake_eight_points(seed):
    m = snowflake(random_metric(8, seed), 0.5)
    assert cycl4_check(m, 0.0).passed
    order = np.random.default_rng(seed).permutation(8)
    assert_verified(m, order, majorize(m, order, 0.0))


@pytest.mark.parametrize("seed", range(6))
def test_flat_homogeneity(seed):
    m, _ = sample_model_subset(6, 0.0, seed=seed)
    a = pairwise(comparison_map(m, range(6), 0.0).points)
    b = pairwise(comparison_map(m.scaled(3.5), range(6), 0.0).points)
    assert np.allclose(b, 3.5 * a, atol=1e-9)


@pytest.mark.parametrize("kappa", KAPPAS)
def test_recursion_bounds(kappa):
    for seed in range(10):
        n = 4 + seed % 7
        m, _ = sample_model_subset(n, kappa, seed=seed)
        b = _Builder(kappa, n, m.scale, shortcuts=False)
        b.build(np.array(m.d))
        assert b.calls <= 2 ** n
        assert b.max_depth <= n


# canonical form

def _some_map(kappa, seed=1):
    m, _ = sample_model_subset(6, kappa, seed=seed)
    return comparison_map(m, range(6), kappa)


@pytest.mark.parametrize("kappa", KAPPAS)
def test_canonicalize_is_an_isometry(kappa):
    cm = _some_map(kappa)
    # move the map by a rigid motion first
    frame = model.tangent_frame(model.from_polar(kappa, 0.4, 2.0), model.from_polar(kappa, 0.1, 0.3))
    moved = [model.from_frame_coordinates(p, frame) for p in cm.points]
    assert np.allclose(pairwise(moved), pairwise(cm.points), atol=1e-12)
    out = canonicalize(ComparisonMap(kappa, moved))
    assert np.allclose(pairwise(out.points), pairwise(moved), atol=1e-12)
    assert out.points[0] == model.base_point(kappa)
    second = out.points[1]
    assert abs(second.coords[1]) < 1e-12 and second.coords[0] > 0


@pytest.mark.parametrize("kappa", KAPPAS)
def test_canonicalize_idempotent_and_reflection_invariant(kappa):
    cm = _some_map(kappa, seed=4)
    once = canonicalize(cm)
    twice = canonicalize(once)
    assert all(np.allclose(a.coords, b.coords, atol=1e-12) for a, b in zip(once.points, twice.points))
    mirrored = canonicalize(ComparisonMap(kappa, [model.reflect_y(p) for p in cm.points]))
    assert all(np.allclose(a.coords, b.coords, atol=1e-12) for a, b in zip(once.points, mirrored.points))
    # the polygon sits on the left of its first edge
    base, axis = once.points[0], once.points[1]
    assert all(model.signed_distance_to_line(base, axis, p) >= -1e-12 for p in once.points)


def test_canonicalize_constant_map():
    p = model.from_polar(1.0, 0.5, 0.5)
    out = canonicalize(ComparisonMap(1.0, [p, p, p]))
    assert all(q == model.base_point(1.0) for q in out.points)


def test_map_round_trips_through_dict():
    cm = _some_map(-1.0)
    back = ComparisonMap.from_dict(cm.to_dict())
    assert back.indices == cm.indices
    assert all(np.allclose(a.coords, b.coords) for a, b in zip(back.points, cm.points))
    flat = ComparisonMap.from_dict(_some_map(0.0).to_dict())
    assert all(p.coords[2] == 0.0 for p in flat.points)


@given(st.integers(0, 10**6), st.sampled_from(KAPPAS), st.integers(2, 8))
def test_majorize_sound_on_random_samples(seed, kappa, n):
    m, _ = sample_model_subset(n, kappa, seed=seed)
    rng = np.random.default_rng(seed)
    t = list(rng.integers(0, n, size=int(rng.integers(1, n + 3))))
    if kappa > 0 and perimeter(m, t) >= 2 * model.diameter(kappa):
        # back-and-forth tuples can exceed the sampler's perimeter guarantee
        with pytest.raises(PerimeterTooLarge):
            majorize(m, t, kappa)
        return
    cm = majorize(m, t, kappa)
    assert_verified(m, t, cm)
