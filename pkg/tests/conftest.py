import math

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from kmajor import model
from kmajor.metric import FiniteMetric, from_points

settings.register_profile("default", deadline=None, max_examples=200,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

KAPPAS = (-1.0, 0.0, 1.0)


def unit_square() -> FiniteMetric:
    r = math.sqrt(2)
    return FiniteMetric([[0, 1, r, 1], [1, 0, 1, r], [r, 1, 0, 1], [1, r, 1, 0]])


def four_cycle() -> FiniteMetric:
    return FiniteMetric([[0, 1, 2, 1], [1, 0, 1, 2], [2, 1, 0, 1], [1, 2, 1, 0]])


def regular_polygon(n: int, radius: float = 1.0):
    pts = [model.plane_point(radius * math.cos(2 * math.pi * k / n), radius * math.sin(2 * math.pi * k / n))
           for k in range(n)]
    return from_points(pts), pts


@pytest.fixture(params=KAPPAS, ids=["hyperbolic", "flat", "spherical"])
def kappa(request):
    return request.param


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


_VERDICTS = pytest.StashKey[list]()


def pytest_configure(config):
    config.stash[_VERDICTS] = []


@pytest.fixture
def verdict(request):
    """Record one acceptance line; the test then asserts on the same flag."""
    lines = request.config.stash[_VERDICTS]

    def record(k: int, ok: bool, detail: str) -> bool:
        line = f"{'PASS' if ok else 'FAIL'} criterion {k}: {detail}"
        lines.append(line)
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(_VERDICTS, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
