"""Geometry tests: frozen oracles, independent cross-checks, and properties."""

import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from diagslice import geometry as geo
from diagslice.errors import NumericError, QuantileRangeError


# ---------------------------------------------------------------------------
# independent oracles


def rational_volume_below(d: int, r: Fraction) -> Fraction:
    """Exact rational Irwin-Hall CDF, evaluated entirely in integer arithmetic."""
    if r <= 0:
        return Fraction(0)
    if r >= d:
        return Fraction(1)
    total = Fraction(0)
    j = 0
    while j <= math.floor(r):
        total += (-1) ** j * math.comb(d, j) * (r - j) ** d
        j += 1
    return total / math.factorial(d)


def mc_volume_below(d: int, r: float, samples: int, seed: int) -> tuple[float, float]:
    """Monte-Carlo estimate of P(sum of d uniforms <= r) with its standard error."""
    gen = np.random.default_rng(seed)
    hits = gen.random((samples, d)).sum(axis=1) <= r
    p = hits.mean()
    se = math.sqrt(max(p * (1 - p), 1e-12) / samples)
    return p, se


def cubic_root_d3(v: float) -> float:
    """Closed-form cut offset for d=3 and upper volume v, solved independently.

    The offset satisfies one cubic per volume regime; the middle regime is
    solved with a generic polynomial root finder and the outer regimes by
    radicals.
    """
    if v >= 5 / 6:
        # lower segment: below-volume 1-v = r^3/6
        return (6.0 * (1.0 - v)) ** (1.0 / 3.0)
    if v < 1 / 6:
        # upper segment: (3-r)^3 = 6v
        return 3.0 - (6.0 * v) ** (1.0 / 3.0)
    # middle segment: 2r^3 - 9r^2 + 9r + 3 - 6v = 0 with root in [1, 2]
    roots = np.roots([2.0, -9.0, 9.0, 3.0 - 6.0 * v])
    real = [z.real for z in roots if abs(z.imag) < 1e-9 and 1.0 - 1e-9 <= z.real <= 2.0 + 1e-9]
    assert len(real) == 1, (v, roots)
    return real[0]


# quantile reference pairs precomputed with 60-digit arithmetic by inverting
# the error function directly (an evaluation route disjoint from the
# package's), each evaluated at the exact binary double of the argument
QUANTILE_REFERENCE = [
    (0.84, 0.994457883209753),
    (0.0001, -3.7190164854556804),
    (0.9999, 3.7190164854557084),
    (0.02425, -1.972961051311885),
    (0.975, 1.9599639845400538),
    (0.3, -0.5244005127080408),
    (0.0084, -2.391055785778313),
    (0.001, -3.0902323061678136),
    (0.25, -0.6744897501960817),
    (1e-08, -5.612001244174789),
    (0.999999, 4.753424308817087),
    (0.7, 0.5244005127080407),
]

CDF_REFERENCE = [
    (-3.719, 0.00010000652593416139),
    (0.0, 0.5),
    (0.9944578832097532, 0.84000000000000001),
    (1.959963984540054, 0.97499999999999999),
    (-5.0, 2.8665157187919391e-07),
    (2.3911, 0.99160101154737935),
]


# ---------------------------------------------------------------------------
# slice volumes


def test_volume_above_reference_values():
    assert abs(geo.volume_above(3, 1.0) - 5 / 6) < 1e-15
    assert abs(geo.volume_above(3, 2.0) - 1 / 6) < 1e-15
    assert abs(geo.volume_above(2, 0.5) - 0.875) < 1e-15
    for d in range(2, 11):
        assert abs(geo.volume_above(d, d / 2) - 0.5) < 1e-12


def test_volume_below_reference_values():
    assert abs(geo.volume_below(2, 1.0) - 0.5) < 1e-15
    assert abs(geo.volume_below(3, 1.0) - 1 / 6) < 1e-15
    assert abs(geo.volume_below(5, 2.5) - 0.5) < 1e-12
    assert geo.volume_below(4, 0.0) == 0.0
    assert geo.volume_below(4, 4.0) == 1.0


def test_volume_domain_validation():
    with pytest.raises(ValueError):
        geo.volume_below(3, -0.1)
    with pytest.raises(ValueError):
        geo.volume_above(3, 3.1)
    with pytest.raises(ValueError):
        geo.volume_below(0, 0.0)
    with pytest.raises(ValueError):
        geo.volume_below(geo.MAX_DIMENSION + 1, 1.0)
    with pytest.raises(TypeError):
        geo.volume_below(2.0, 1.0)
    with pytest.raises(TypeError):
        geo.volume_below(True, 0.5)


def test_volume_complementarity():
    gen = np.random.default_rng(20240811)
    for d in range(1, geo.MAX_DIMENSION + 1):
        for r in gen.random(1000) * d:
            total = geo.volume_above(d, r) + geo.volume_below(d, r)
            assert abs(total - 1.0) <= 1e-11, (d, r)


def test_volume_below_matches_rational_reference():
    # integer and half-integer offsets have exact binary representations,
    # so the rational oracle sees exactly the same inputs
    for d in range(1, geo.MAX_DIMENSION + 1):
        for twice_r in range(0, 2 * d + 1):
            r = Fraction(twice_r, 2)
            expected = rational_volume_below(d, r)
            got = geo.volume_below(d, float(r))
            assert abs(got - float(expected)) <= 1e-11, (d, r)


def test_volume_below_monte_carlo():
    for d, r, seed in [(4, 1.7, 11), (6, 2.2, 12), (3, 0.8, 13)]:
        est, se = mc_volume_below(d, r, 1_000_000, seed)
        assert abs(geo.volume_below(d, r) - est) <= 4 * se, (d, r)


def test_volume_monotonicity():
    for d in (2, 5, 9):
        grid = np.linspace(0.0, d, 200)
        below = [geo.volume_below(d, r) for r in grid]
        above = [geo.volume_above(d, r) for r in grid]
        assert all(a <= b + 1e-15 for a, b in zip(below, below[1:]))
        assert all(a >= b - 1e-15 for a, b in zip(above, above[1:]))


# ---------------------------------------------------------------------------
# breakpoints


def test_breakpoints_exact_rationals():
    assert geo.breakpoints(3).as_fractions() == [
        Fraction(0), Fraction(1, 6), Fraction(5, 6), Fraction(1)]
    assert geo.breakpoints(2).as_fractions() == [Fraction(0), Fraction(1, 2), Fraction(1)]
    assert geo.breakpoints(4).as_fractions() == [
        Fraction(0), Fraction(1, 24), Fraction(1, 2), Fraction(23, 24), Fraction(1)]


def test_breakpoints_floats_correctly_rounded():
    for d in range(1, geo.MAX_DIMENSION + 1):
        bp = geo.breakpoints(d)
        for fl, fr in zip(bp.f, bp.as_fractions()):
            assert fl == float(fr), (d, fr)


def test_breakpoints_symmetry_and_monotone():
    for d in range(1, geo.MAX_DIMENSION + 1):
        fr = geo.breakpoints(d).as_fractions()
        assert fr[0] == 0 and fr[-1] == 1
        assert all(a < b for a, b in zip(fr, fr[1:]))
        for k in range(d + 1):
            assert fr[k] + fr[d - k] == 1


def test_breakpoints_match_volume_below():
    for d in (2, 3, 4, 7, 12):
        bp = geo.breakpoints(d)
        for k in range(d + 1):
            assert abs(bp.f[k] - geo.volume_below(d, float(k))) <= 1e-12


def test_breakpoints_monte_carlo_confirmation():
    # spot-check the derived d=4 values against brute-force volume
    est, se = mc_volume_below(4, 2.0, 1_000_000, 21)
    assert abs(0.5 - est) <= 4 * se
    est, se = mc_volume_below(4, 1.0, 1_000_000, 22)
    assert abs(1 / 24 - est) <= 4 * se


# ---------------------------------------------------------------------------
# root solving


def test_solve_offset_two_dim_closed_form():
    for i in (1, 2, 3):
        r = geo.solve_offset(2, 1 - i / 4)
        expected = math.sqrt(2 * i / 4) if i <= 2 else 2 - math.sqrt(2 * (4 - i) / 4)
        assert abs(r - expected) <= 1e-10, i


def test_solve_offset_breakpoint_hits():
    assert geo.solve_offset(3, 5 / 6) == 1.0
    assert geo.solve_offset(3, 1 / 6) == 2.0
    assert geo.solve_offset(4, 0.0) == 4.0
    assert geo.solve_offset(4, 1.0) == 0.0


def test_solve_offset_d3_matches_cubic_oracle():
    gen = np.random.default_rng(7)
    regimes = [(0.0, 1 / 6), (1 / 6, 5 / 6), (5 / 6, 1.0)]
    for lo, hi in regimes:
        for v in lo + (hi - lo) * gen.random(100):
            assert abs(geo.solve_offset(3, v) - cubic_root_d3(v)) <= 1e-10, v


@settings(max_examples=200, deadline=None)
@given(st.integers(min_value=1, max_value=8), st.floats(min_value=1e-6, max_value=1 - 1e-6))
def test_solve_offset_round_trip(d, v):
    r = geo.solve_offset(d, v)
    assert 0.0 <= r <= d
    assert abs(geo.volume_above(d, r) - v) <= 1e-12


def test_solve_offset_validation_and_nonconvergence():
    with pytest.raises(ValueError):
        geo.solve_offset(3, -0.1)
    with pytest.raises(ValueError):
        geo.solve_offset(3, 1.1)
    with pytest.raises(ValueError):
        geo.solve_offset(3, 0.5, tol=0.0)
    with pytest.raises(NumericError) as err:
        geo.solve_offset(3, 0.3, tol=1e-30)
    assert err.value.bracket is not None


# ---------------------------------------------------------------------------
# partitions


def test_equivolume_trivial_and_small():
    assert geo.equivolume_partition(3, 1).cuts == ()
    part = geo.equivolume_partition(3, 4)
    assert part.n_strata == 4
    for v in part.volumes:
        assert abs(v - 0.25) <= 1e-10
    assert abs(math.fsum(part.volumes) - 1.0) <= 1e-12


def test_equivolume_two_dim_display_set():
    part = geo.equivolume_partition(2, 6)
    expected = [math.sqrt(1 / 3), math.sqrt(2 / 3), 1.0,
                2 - math.sqrt(2 / 3), 2 - math.sqrt(1 / 3)]
    assert np.allclose(part.cuts, expected, rtol=0, atol=1e-10)


def test_equivolume_symmetry_and_volumes():
    for d, n in [(3, 7), (5, 12), (8, 25), (12, 9)]:
        part = geo.equivolume_partition(d, n)
        cuts = part.cuts
        for i in range(len(cuts)):
            assert abs(cuts[i] + cuts[len(cuts) - 1 - i] - d) <= 1e-10
        for v in part.volumes:
            assert abs(v - 1 / n) <= 1e-10
        assert abs(math.fsum(part.volumes) - 1.0) <= 1e-12


def test_partition_validation():
    with pytest.raises(ValueError):
        geo.Partition(d=2, cuts=(0.0, 1.0))
    with pytest.raises(ValueError):
        geo.Partition(d=2, cuts=(1.0, 1.0))
    with pytest.raises(ValueError):
        geo.Partition(d=2, cuts=(1.5, 1.2))
    with pytest.raises(ValueError):
        geo.Partition(d=2, cuts=(0.5, 2.0))
    part = geo.Partition(d=2, cuts=(0.5, 1.0))
    assert part.boundaries == (0.0, 0.5, 1.0, 2.0)
    assert part.stratum_volume(0) > 0


def test_diagonal_coords_validation():
    geo.DiagonalCoords(d=2, p=(0.3, 0.3))  # ties allowed
    with pytest.raises(ValueError):
        geo.DiagonalCoords(d=2, p=(0.5, 0.4))
    with pytest.raises(ValueError):
        geo.DiagonalCoords(d=2, p=(-0.1,))
    with pytest.raises(ValueError):
        geo.DiagonalCoords(d=2, p=(1.4142136,))  # just above sqrt(2)


def test_diagonal_conversion_examples():
    dc = geo.to_diagonal(geo.Partition(d=2, cuts=(1.0,)))
    assert abs(dc.p[0] - 1 / math.sqrt(2)) <= 1e-15
    part = geo.equivolume_partition(2, 4)
    dc = geo.to_diagonal(part)
    expected = [0.5, 1 / math.sqrt(2), math.sqrt(2) - 0.5]
    assert np.allclose(dc.p, expected, rtol=0, atol=1e-12)


@settings(max_examples=200, deadline=None)
@given(
    st.integers(min_value=1, max_value=12),
    st.lists(st.floats(min_value=0.01, max_value=0.99), min_size=1, max_size=6, unique=True),
)
def test_diagonal_round_trip(d, fractions):
    cuts = tuple(sorted(f * d for f in fractions))
    part = geo.Partition(d=d, cuts=cuts)
    back = geo.from_diagonal(geo.to_diagonal(part))
    for a, b in zip(part.cuts, back.cuts):
        assert abs(a - b) <= 1e-15 * max(1.0, a)


# ---------------------------------------------------------------------------
# normal approximation


def test_normal_cdf_reference():
    for x, expected in CDF_REFERENCE:
        assert abs(geo.normal_cdf(x) - expected) <= 1e-14


def test_normal_quantile_reference():
    assert geo.normal_quantile(0.5) == 0.0
    for p, expected in QUANTILE_REFERENCE:
        assert abs(geo.normal_quantile(p) - expected) <= 1e-12, p


def test_normal_quantile_round_trip_and_antisymmetry():
    gen = np.random.default_rng(99)
    for p in np.concatenate([gen.random(200), [1e-6, 1e-4, 0.5, 1 - 1e-6]]):
        if not 0.0 < p < 1.0:
            continue
        x = geo.normal_quantile(p)
        assert abs(geo.normal_cdf(x) - p) <= 1e-13
        if 1e-4 <= p <= 1 - 1e-4:
            # computing 1 - p here rounds by ~1e-16, which the inverse map
            # amplifies by 1/density; stay where that amplification is small
            assert abs(x + geo.normal_quantile(1.0 - p)) <= 1e-12


def test_normal_quantile_domain():
    for bad in (0.0, 1.0, -0.2, 1.7):
        with pytest.raises(ValueError):
            geo.normal_quantile(bad)


def test_normal_approx_partition_basics():
    for d in (2, 5, 9):
        assert geo.normal_approx_partition(d, 2).cuts == (d / 2,)
    part = geo.normal_approx_partition(5, 100)
    scale = math.sqrt(5) / (2 * math.sqrt(3))
    assert abs(part.cuts[83] - (2.5 + scale * 0.99445788320975317)) <= 1e-10
    cuts = part.cuts
    for i in range(len(cuts)):
        assert cuts[i] + cuts[len(cuts) - 1 - i] == 5.0  # mirrored, hence exact
    assert all(a < b for a, b in zip(cuts, cuts[1:]))


def test_normal_approx_partition_range_error():
    with pytest.raises(QuantileRangeError):
        geo.normal_approx_partition(2, 200)
    with pytest.raises(ValueError):
        geo.normal_approx_partition(1, 10)
    with pytest.raises(ValueError):
        geo.normal_approx_partition(3, 1)


# ---------------------------------------------------------------------------
# hybrid construction


def test_hybrid_equals_normal_when_no_extreme_cuts():
    # f(1) = 1/120 and the smallest target is 1/100, so no closed-form segment
    assert geo.hybrid_partition(5, 100).cuts == geo.normal_approx_partition(5, 100).cuts


def test_hybrid_trivial_middle_cut():
    for d in (2, 4, 7):
        assert geo.hybrid_partition(d, 2).cuts == (d / 2,)


def test_hybrid_closed_form_head_and_boundary():
    # at n = 2 * d! the second target sits exactly on f(1), still closed form
    part = geo.hybrid_partition(5, 240)
    assert part.cuts[0] == (math.factorial(5) / 240) ** (1 / 5)
    assert part.cuts[1] == 1.0
    assert part.cuts[-1] == 5.0 - part.cuts[0]
    assert all(a < b for a, b in zip(part.cuts, part.cuts[1:]))


def test_hybrid_seam_repair_keeps_cuts_increasing():
    part = geo.hybrid_partition(5, 1000)
    cuts = part.cuts
    assert all(a < b for a, b in zip(cuts, cuts[1:]))
    fact = math.factorial(5)
    # closed-form head: targets i/1000 up to f(1) = 1/120, i.e. i <= 8
    for i in range(1, 9):
        assert abs(cuts[i - 1] - (fact * i / 1000) ** (1 / 5)) <= 1e-12
    # the repaired cuts just past the head are exact roots for their targets
    for i in range(9, 27):
        assert abs(geo.volume_below(5, cuts[i - 1]) - i / 1000) <= 1e-11
    # beyond the seam the quantile value takes over again (visible as error)
    assert abs(geo.volume_below(5, cuts[26]) - 27 / 1000) > 1e-6
    # mirrored upper half keeps the symmetry exact
    for i in range(len(cuts)):
        assert cuts[i] + cuts[len(cuts) - 1 - i] == 5.0


def test_hybrid_flagship_head():
    part = geo.hybrid_partition(5, 10000)
    fact = math.factorial(5)
    assert part.cuts[0] == (fact / 10000) ** (1 / 5)
    for i in range(1, 84):
        assert abs(part.cuts[i - 1] - (fact * i / 10000) ** (1 / 5)) <= 1e-12
    assert all(a < b for a, b in zip(part.cuts, part.cuts[1:]))


def test_hybrid_validation():
    with pytest.raises(ValueError):
        geo.hybrid_partition(1, 10)
    with pytest.raises(ValueError):
        geo.hybrid_partition(4, 1)


# ---------------------------------------------------------------------------
# normal-approximation error bound


def test_berry_esseen_bound_values():
    base = 0.4748 * (2 * math.sqrt(3)) ** 3 / 32
    assert abs(geo.berry_esseen_bound(1) - base) <= 1e-15
    assert abs(geo.berry_esseen_bound(4) - base / 2) <= 1e-15
    values = [geo.berry_esseen_bound(d) for d in range(1, 13)]
    assert all(a > b for a, b in zip(values, values[1:]))
