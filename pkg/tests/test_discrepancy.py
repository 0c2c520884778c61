"""Discrepancy tests against exact rational and quadrature oracles."""

import math
from fractions import Fraction
from itertools import product

import numpy as np
import pytest

from diagslice import geometry as geo
from diagslice.discrepancy import (
    DiscrepancyEstimate,
    IidSource,
    StratifiedSource,
    _l2_terms_np,
    _l2_terms_py,
    expected_l2_star_sq,
    iid_expected_l2_star_sq,
    l2_star_sq,
)
from diagslice.errors import SamplingError
from diagslice.rng import RngSpec
from diagslice.sampling import PointSet


def rational_l2_star_sq(points):
    """Exact squared discrepancy by decomposing the cube into boxes.

    Within each open box bounded by point coordinates the covering count is
    constant, so the defining integral reduces to polynomial pieces that sum
    exactly in rational arithmetic.  Entirely independent of the closed form
    used by the implementation.
    """
    n = len(points)
    d = len(points[0])
    edges = [sorted({Fraction(0), Fraction(1), *(p[j] for p in points)}) for j in range(d)]
    total = Fraction(0)
    for seg in product(*(range(len(e) - 1) for e in edges)):
        a = [edges[j][seg[j]] for j in range(d)]
        b = [edges[j][seg[j] + 1] for j in range(d)]
        c = sum(1 for p in points if all(p[j] <= a[j] for j in range(d)))
        vol = Fraction(1)
        lin = Fraction(1)
        quad = Fraction(1)
        for x, y in zip(a, b):
            vol *= y - x
            lin *= Fraction(y * y - x * x, 2)
            quad *= Fraction(y ** 3 - x ** 3, 3)
        total += Fraction(c * c, n * n) * vol - 2 * Fraction(c, n) * lin + quad
    return total


def grid_quadrature_l2sq(points: np.ndarray, m: int = 2000) -> float:
    """Midpoint-rule quadrature of the defining integral, d=2 only."""
    g = (np.arange(m) + 0.5) / m
    count = np.zeros((m, m))
    for p in points:
        count += np.outer(g > p[0], g > p[1])
    return float(((count / len(points) - np.outer(g, g)) ** 2).mean())


def test_corner_point_values():
    # a single point at the origin covers nothing: 1/9 - 1/2 + 1 = 11/18
    assert abs(l2_star_sq(np.array([[0.0, 0.0]])) - 11 / 18) <= 1e-15
    # a single point at the far corner covers every box: 1/9
    assert abs(l2_star_sq(np.array([[1.0, 1.0]])) - 1 / 9) <= 1e-15


def test_matches_rational_box_oracle():
    gen = np.random.default_rng(20240815)
    for d, n in [(1, 1), (1, 6), (2, 5), (2, 12), (3, 7)]:
        ints = gen.integers(0, 33, size=(n, d))
        rational = [tuple(Fraction(int(k), 32) for k in row) for row in ints]
        expected = rational_l2_star_sq(rational)
        got = l2_star_sq(ints / 32)  # dyadic, so floats are exact
        assert abs(got - float(expected)) <= 1e-13, (d, n)


def test_matches_grid_quadrature():
    gen = np.random.default_rng(4321)
    pts = gen.random((8, 2))
    assert abs(l2_star_sq(pts) - grid_quadrature_l2sq(pts)) <= 1e-5


def test_scalar_and_vector_paths_agree():
    gen = np.random.default_rng(11)
    pts = gen.random((49, 3))
    s1p, s2p = _l2_terms_py(pts.tolist(), 3)
    s1n, s2n = _l2_terms_np(pts)
    assert abs(s1p - s1n) <= 1e-10 * abs(s1p)
    assert abs(s2p - s2n) <= 1e-10 * abs(s2p)


def test_point_set_and_array_inputs_agree():
    gen = np.random.default_rng(12)
    pts = gen.random((6, 2))
    assert l2_star_sq(PointSet(d=2, points=pts)) == l2_star_sq(pts)


def test_input_validation():
    with pytest.raises(ValueError):
        l2_star_sq(np.zeros((0, 2)))
    with pytest.raises(ValueError):
        l2_star_sq(np.zeros(3))
    with pytest.raises(ValueError):
        l2_star_sq(np.array([[0.5, 1.2]]))
    with pytest.raises(ValueError):
        iid_expected_l2_star_sq(0, 5)
    with pytest.raises(ValueError):
        IidSource(d=2, n=0)


def test_iid_estimate_matches_closed_form():
    for d, n in [(2, 8), (3, 5)]:
        est = expected_l2_star_sq(IidSource(d=d, n=n), 20000, RngSpec(master_seed=606))
        target = iid_expected_l2_star_sq(d, n)
        assert abs(est.mean - target) <= 4 * est.se, (d, n, est)
        assert est.se < 0.05 * target


def test_estimate_deterministic_and_thread_invariant():
    src = IidSource(d=2, n=4)
    spec = RngSpec(master_seed=909, stream_id=3)
    a = expected_l2_star_sq(src, 600, spec, threads=1)
    b = expected_l2_star_sq(src, 600, spec, threads=1)
    assert a == b
    c = expected_l2_star_sq(src, 600, spec, threads=4)
    assert a == c


def test_stratified_source_reduces_mean():
    part = geo.equivolume_partition(2, 4)
    est = expected_l2_star_sq(StratifiedSource(part), 4000, RngSpec(master_seed=70))
    assert est.mean + 4 * est.se < iid_expected_l2_star_sq(2, 4)


def test_stratified_source_guards_thin_strata():
    part = geo.Partition(d=2, cuts=(1.0, 1.0 + 1e-12))
    with pytest.raises(SamplingError):
        StratifiedSource(part)


def test_estimator_validation():
    with pytest.raises(ValueError):
        expected_l2_star_sq(IidSource(d=2, n=3), 1, RngSpec(master_seed=1))


def test_thread_env_parsing(monkeypatch):
    from diagslice.discrepancy import _thread_count
    monkeypatch.setenv("DIAGSLICE_THREADS", "3")
    assert _thread_count() == 3
    monkeypatch.setenv("DIAGSLICE_THREADS", "-2")
    assert _thread_count() == 1
    monkeypatch.setenv("DIAGSLICE_THREADS", "many")
    with pytest.raises(ValueError):
        _thread_count()
    monkeypatch.delenv("DIAGSLICE_THREADS")
    assert _thread_count() == 1


def test_stratified_source_draw_cap():
    from diagslice.errors import SamplingError
    from diagslice.rng import RngSpec

    part = geo.equivolume_partition(2, 3)
    with pytest.raises(ValueError):
        StratifiedSource(part, max_draws=0)
    capped = StratifiedSource(part, max_draws=1)
    with pytest.raises(SamplingError):
        capped.draw(RngSpec(5, 0).generator())
