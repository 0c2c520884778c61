"""Slicing the unit cube by hyperplanes orthogonal to the main diagonal.

A partition of [0,1]^d is described by cut offsets 0 < r_1 < ... < r_{N-1} < d,
where cut i is the hyperplane {x : x_1 + ... + x_d = r_i}.  The volume below a
cut is the Irwin-Hall distribution function of the coordinate sum, a piecewise
polynomial of degree d.  This module evaluates those volumes exactly, inverts
them to build equal-volume partitions, and provides two cheaper constructions:
a normal-quantile approximation and a hybrid that keeps closed-form cuts in
the extreme segments of the cube.
"""

from __future__ import annotations

import math
from bisect import bisect_left
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache

import numpy as np

from .errors import NumericError, QuantileRangeError

__all__ = [
    "MAX_DIMENSION",
    "Partition",
    "DiagonalCoords",
    "VolumeBreakpoints",
    "volume_below",
    "volume_above",
    "breakpoints",
    "solve_offset",
    "equivolume_partition",
    "normal_cdf",
    "normal_quantile",
    "normal_approx_partition",
    "hybrid_partition",
    "to_diagonal",
    "from_diagonal",
    "berry_esseen_bound",
]

# Alternating-sum cancellation in the slice volume grows with d; beyond this
# double precision can no longer deliver the tolerances promised here.
MAX_DIMENSION = 12

_BISECT_STEPS = 60
_NEWTON_STEPS = 8
_DEFAULT_TOL = 1e-12


def _checked_dim(d) -> int:
    if isinstance(d, bool) or not isinstance(d, (int, np.integer)):
        raise TypeError(f"dimension must be an integer, got {d!r}")
    d = int(d)
    if d < 1:
        raise ValueError(f"dimension must be >= 1, got {d}")
    if d > MAX_DIMENSION:
        raise ValueError(
            f"dimension {d} exceeds the supported cap of {MAX_DIMENSION} "
            "(double-precision alternating sums degrade beyond it)"
        )
    return d


def _checked_offset(d: int, r) -> float:
    r = float(r)
    if not 0.0 <= r <= d:
        raise ValueError(f"offset must lie in [0, {d}], got {r}")
    return r


# ---------------------------------------------------------------------------
# slice volumes


def _below_sum(d: int, r: float) -> float:
    terms = [(-1) ** j * math.comb(d, j) * (r - j) ** d for j in range(int(r) + 1)]
    return math.fsum(terms) / math.factorial(d)


def _above_sum(d: int, r: float) -> float:
    k = math.ceil(d - r)
    terms = [(-1) ** j * math.comb(d, j) * ((d - j) - r) ** d for j in range(k)]
    return math.fsum(terms) / math.factorial(d)


def volume_below(d: int, r: float) -> float:
    """Volume of ``{x in [0,1]^d : x_1 + ... + x_d <= r}``.

    This is the Irwin-Hall distribution function of the coordinate sum.  The
    alternating sum is accumulated with error-free summation, always on the
    side of the centre where its terms stay small: the expansion around the
    far corner is badly cancelled (its leading terms dwarf the result), so
    results past d/2 are computed as one minus the opposite tail.
    """
    d = _checked_dim(d)
    r = _checked_offset(d, r)
    if r == 0.0:
        return 0.0
    if r == d:
        return 1.0
    v = _below_sum(d, r) if 2.0 * r <= d else 1.0 - _above_sum(d, r)
    return min(1.0, max(0.0, v))


def volume_above(d: int, r: float) -> float:
    """Volume of ``{x in [0,1]^d : x_1 + ... + x_d >= r}``.

    Evaluated as the piecewise polynomial in (d - r); equals
    ``1 - volume_below(d, r)`` by reflection through the cube centre.
    """
    d = _checked_dim(d)
    r = _checked_offset(d, r)
    if r == 0.0:
        return 1.0
    if r == d:
        return 0.0
    v = _above_sum(d, r) if 2.0 * r >= d else 1.0 - _below_sum(d, r)
    return min(1.0, max(0.0, v))


def _density(d: int, r: float) -> float:
    """Irwin-Hall density of the coordinate sum (derivative of volume_below)."""
    if r <= 0.0 or r >= d:
        return 0.0
    terms = [(-1) ** j * math.comb(d, j) * (r - j) ** (d - 1) for j in range(int(r) + 1)]
    return max(0.0, math.fsum(terms) / math.factorial(d - 1))


def _volume_below_array(d: int, r: np.ndarray) -> np.ndarray:
    """Vectorised volume_below for interior offsets.

    Same tail-selection as the scalar version: past d/2 the below-expansion
    cancels badly, so those entries come from one minus the above-expansion.
    """
    r = np.asarray(r, dtype=float)
    fact = math.factorial(d)
    below = np.zeros_like(r)
    above = np.zeros_like(r)
    for j in range(d + 1):
        coeff = (-1) ** j * math.comb(d, j)
        below += coeff * np.maximum(r - j, 0.0) ** d
        above += coeff * np.maximum((d - j) - r, 0.0) ** d
    out = np.where(2.0 * r <= d, below / fact, 1.0 - above / fact)
    return np.clip(out, 0.0, 1.0)


def _density_array(d: int, r: np.ndarray) -> np.ndarray:
    r = np.asarray(r, dtype=float)
    acc = np.zeros_like(r)
    for j in range(d + 1):
        diff = np.maximum(r - j, 0.0)
        acc += ((-1) ** j * math.comb(d, j)) * diff ** (d - 1)
    return np.maximum(acc / math.factorial(d - 1), 0.0)


# ---------------------------------------------------------------------------
# breakpoints


@lru_cache(maxsize=None)
def _breakpoint_numerators(d: int) -> tuple[int, ...]:
    # f(k) = numerator / d!, computed in exact integer arithmetic
    nums = []
    for k in range(d + 1):
        acc = 0
        for j in range(k):
            acc += (-1) ** j * math.comb(d, j) * (k - j) ** d
        nums.append(acc)
    return tuple(nums)


@dataclass(frozen=True)
class VolumeBreakpoints:
    """Cumulative below-volumes f(0)..f(d) at the integer cut offsets.

    f(k) = volume_below(d, k).  Cuts with below-volume in [f(k-1), f(k)] live
    in the integer segment [k-1, k]; the solver brackets roots with these.
    """

    d: int
    f: tuple[float, ...]

    def as_fractions(self) -> list[Fraction]:
        """Exact rational values of f(0)..f(d)."""
        fact = math.factorial(self.d)
        return [Fraction(n, fact) for n in _breakpoint_numerators(self.d)]


@lru_cache(maxsize=None)
def breakpoints(d: int) -> VolumeBreakpoints:
    """Below-volumes at integer offsets, exact up to one float rounding each."""
    d = _checked_dim(d)
    fact = math.factorial(d)
    floats = tuple(n / fact for n in _breakpoint_numerators(d))
    return VolumeBreakpoints(d=d, f=floats)


# ---------------------------------------------------------------------------
# root solving


def _polish_newton(d, r, target_below, seg_lo, seg_hi, tol):
    # Newton steps on volume_below(r) - target, kept inside the segment
    for _ in range(_NEWTON_STEPS):
        fv = volume_below(d, r) - target_below
        if fv == 0.0:
            break
        dens = _density(d, r)
        if dens <= 0.0:
            break
        step = fv / dens
        r_new = min(max(r - step, seg_lo), seg_hi)
        if r_new == r and abs(fv) <= tol:
            break
        if r_new == r:
            break
        r = r_new
    return r


def _solve_below(d: int, target: float, tol: float) -> float:
    """Offset r with volume_below(d, r) = target, for target strictly in (0,1)."""
    bp = breakpoints(d)
    i = bisect_left(bp.f, target)
    if bp.f[i] == target:
        return float(i)
    seg_lo, seg_hi = float(i - 1), float(i)
    lo, hi = seg_lo, seg_hi
    for _ in range(_BISECT_STEPS):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if volume_below(d, mid) < target:
            lo = mid
        else:
            hi = mid
    r = _polish_newton(d, 0.5 * (lo + hi), target, seg_lo, seg_hi, tol)
    if abs(volume_below(d, r) - target) > tol:
        raise NumericError(
            f"root solve did not reach tolerance {tol} for d={d}, target volume {target}",
            bracket=(lo, hi),
        )
    return r


def solve_offset(d: int, v: float, tol: float = _DEFAULT_TOL) -> float:
    """Cut offset r whose above-volume equals v: volume_above(d, r) = v.

    Brackets r between the integer segments given by the breakpoints (the
    volume is strictly monotone there), bisects, then polishes with Newton
    steps on the same polynomial.  tol is measured in volume units.
    """
    d = _checked_dim(d)
    v = float(v)
    if not 0.0 <= v <= 1.0:
        raise ValueError(f"target volume must lie in [0, 1], got {v}")
    if tol <= 0.0:
        raise ValueError("tol must be positive")
    if v == 1.0:
        return 0.0
    if v == 0.0:
        return float(d)
    bp = breakpoints(d)
    i = bisect_left(bp.f, v)
    if bp.f[i] == v:
        # exact breakpoint hit in above-volume space: volume_above(d, d-i) = f(i)
        return float(d - i)
    seg_lo, seg_hi = float(d - i), float(d - i + 1)
    lo, hi = seg_lo, seg_hi
    for _ in range(_BISECT_STEPS):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if volume_above(d, mid) > v:
            lo = mid
        else:
            hi = mid
    r = 0.5 * (lo + hi)
    # polish against volume_above; derivative is -density
    for _ in range(_NEWTON_STEPS):
        fv = volume_above(d, r) - v
        if fv == 0.0:
            break
        dens = _density(d, r)
        if dens <= 0.0:
            break
        r_new = min(max(r + fv / dens, seg_lo), seg_hi)
        if r_new == r:
            break
        r = r_new
    if abs(volume_above(d, r) - v) > tol:
        raise NumericError(
            f"root solve did not reach tolerance {tol} for d={d}, target volume {v}",
            bracket=(lo, hi),
        )
    return r


def _solve_below_batch(d: int, targets: np.ndarray, tol: float) -> np.ndarray:
    """Vectorised root solve in below-volume space for targets in (0,1)."""
    t = np.asarray(targets, dtype=float)
    bp = np.array(breakpoints(d).f)
    idx = np.searchsorted(bp, t, side="left")
    exact = bp[idx] == t
    seg_lo = (idx - 1).astype(float)
    seg_hi = idx.astype(float)
    lo = seg_lo.copy()
    hi = seg_hi.copy()
    for _ in range(_BISECT_STEPS):
        mid = 0.5 * (lo + hi)
        fm = _volume_below_array(d, mid)
        less = fm < t
        lo = np.where(less, mid, lo)
        hi = np.where(less, hi, mid)
        if np.all(hi - lo <= 1e-16):
            break
    r = 0.5 * (lo + hi)
    for _ in range(_NEWTON_STEPS):
        fv = _volume_below_array(d, r) - t
        if np.all(np.abs(fv) <= 0.25 * tol):
            break
        dens = _density_array(d, r)
        safe = dens > 0.0
        step = np.where(safe, fv / np.where(safe, dens, 1.0), 0.0)
        r = np.clip(r - step, seg_lo, seg_hi)
    r = np.where(exact, idx.astype(float), r)
    resid = np.abs(_volume_below_array(d, r) - t)
    worst = int(np.argmax(resid))
    if resid[worst] > tol:
        raise NumericError(
            f"batch root solve missed tolerance {tol} for d={d}, "
            f"target volume {t[worst]}",
            bracket=(float(lo[worst]), float(hi[worst])),
        )
    return r


# ---------------------------------------------------------------------------
# partitions


@dataclass(frozen=True)
class Partition:
    """Cuts 0 < r_1 < ... < r_{N-1} < d splitting the cube into N strata."""

    d: int
    cuts: tuple[float, ...]

    def __post_init__(self):
        d = _checked_dim(self.d)
        object.__setattr__(self, "d", d)
        cuts = tuple(float(c) for c in self.cuts)
        object.__setattr__(self, "cuts", cuts)
        if cuts:
            if not cuts[0] > 0.0:
                raise ValueError(f"first cut must be > 0, got {cuts[0]}")
            if not cuts[-1] < d:
                raise ValueError(f"last cut must be < {d}, got {cuts[-1]}")
            for a, b in zip(cuts, cuts[1:]):
                if not a < b:
                    raise ValueError(f"cuts must be strictly increasing, got {a} before {b}")

    @property
    def n_strata(self) -> int:
        return len(self.cuts) + 1

    @property
    def boundaries(self) -> tuple[float, ...]:
        return (0.0,) + self.cuts + (float(self.d),)

    @cached_property
    def volumes(self) -> tuple[float, ...]:
        below = [volume_below(self.d, b) for b in self.boundaries]
        return tuple(b - a for a, b in zip(below, below[1:]))

    def stratum_volume(self, i: int) -> float:
        return self.volumes[i]


@dataclass(frozen=True)
class DiagonalCoords:
    """Cut positions as Euclidean distances along the main diagonal.

    p_i = r_i / sqrt(d).  Values are sorted and confined to [0, sqrt(d)];
    ties are allowed here (they arise from clamping during optimisation) but
    make the coords unconvertible to a valid Partition.
    """

    d: int
    p: tuple[float, ...]

    def __post_init__(self):
        d = _checked_dim(self.d)
        object.__setattr__(self, "d", d)
        p = tuple(float(x) for x in self.p)
        object.__setattr__(self, "p", p)
        limit = math.sqrt(d)
        for x in p:
            if not 0.0 <= x <= limit:
                raise ValueError(f"diagonal coordinate {x} outside [0, {limit}]")
        for a, b in zip(p, p[1:]):
            if a > b:
                raise ValueError("diagonal coordinates must be sorted ascending")


def to_diagonal(part: Partition) -> DiagonalCoords:
    """Convert cut offsets to distances along the diagonal (divide by sqrt(d))."""
    root = math.sqrt(part.d)
    return DiagonalCoords(d=part.d, p=tuple(c / root for c in part.cuts))


def from_diagonal(dc: DiagonalCoords) -> Partition:
    """Convert diagonal distances back to sum-coordinate cut offsets."""
    root = math.sqrt(dc.d)
    return Partition(d=dc.d, cuts=tuple(x * root for x in dc.p))


def equivolume_partition(d: int, n: int) -> Partition:
    """Partition into n strata of exactly equal volume 1/n.

    Cut i solves volume_below(d, r_i) = i/n with the bracketed bisection and
    Newton polish of :func:`solve_offset`, vectorised over all cuts.
    """
    d = _checked_dim(d)
    n = int(n)
    if n < 1:
        raise ValueError(f"number of strata must be >= 1, got {n}")
    if n == 1:
        return Partition(d=d, cuts=())
    targets = np.arange(1, n, dtype=float) / n
    cuts = _solve_below_batch(d, targets, _DEFAULT_TOL)
    return Partition(d=d, cuts=tuple(cuts.tolist()))


# ---------------------------------------------------------------------------
# normal approximation


_SQRT2 = math.sqrt(2.0)
_INV_SQRT_2PI = 1.0 / math.sqrt(2.0 * math.pi)

# rational initialiser coefficients (Acklam's minimax fit, |rel err| < 1.2e-9)
_QA = (-3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
       1.383577518672690e+02, -3.066479806614716e+01, 2.506628277459239e+00)
_QB = (-5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
       6.680131188771972e+01, -1.328068155288572e+01)
_QC = (-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
       -2.549732539343734e+00, 4.374664141464968e+00, 2.938163982698783e+00)
_QD = (7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
       3.754408661907416e+00)
_Q_SPLIT = 0.02425


def normal_cdf(x: float) -> float:
    """Standard normal distribution function via the complementary error function."""
    return 0.5 * math.erfc(-float(x) / _SQRT2)


def _normal_density(x: float) -> float:
    return _INV_SQRT_2PI * math.exp(-0.5 * x * x)


def _quantile_initial(p: float) -> float:
    if p < _Q_SPLIT:
        q = math.sqrt(-2.0 * math.log(p))
        return ((((((_QC[0] * q + _QC[1]) * q + _QC[2]) * q + _QC[3]) * q + _QC[4]) * q + _QC[5])
                / ((((_QD[0] * q + _QD[1]) * q + _QD[2]) * q + _QD[3]) * q + 1.0))
    if p <= 1.0 - _Q_SPLIT:
        q = p - 0.5
        r = q * q
        return ((((((_QA[0] * r + _QA[1]) * r + _QA[2]) * r + _QA[3]) * r + _QA[4]) * r + _QA[5]) * q
                / (((((_QB[0] * r + _QB[1]) * r + _QB[2]) * r + _QB[3]) * r + _QB[4]) * r + 1.0))
    q = math.sqrt(-2.0 * math.log1p(-p))
    return -((((((_QC[0] * q + _QC[1]) * q + _QC[2]) * q + _QC[3]) * q + _QC[4]) * q + _QC[5])
             / ((((_QD[0] * q + _QD[1]) * q + _QD[2]) * q + _QD[3]) * q + 1.0))


def _quantile_refined(p: float) -> float:
    x = _quantile_initial(p)
    for _ in range(2):
        err = normal_cdf(x) - p
        x -= err / _normal_density(x)
    return x


def normal_quantile(p: float) -> float:
    """Inverse standard normal distribution function.

    Rational initial guess refined by two Newton steps against
    :func:`normal_cdf`; absolute accuracy well below 1e-12 over (0, 1).
    Arguments above one half are reflected to the lower tail, where the
    Newton residual keeps full relative precision (and 1 - p is exact
    there, by Sterbenz).
    """
    p = float(p)
    if not 0.0 < p < 1.0:
        raise ValueError(f"quantile argument must lie in (0, 1), got {p}")
    if p == 0.5:
        return 0.0
    if p > 0.5:
        return -_quantile_refined(1.0 - p)
    return _quantile_refined(p)


def _lower_half_normal(d: int, n: int) -> list[float]:
    scale = math.sqrt(d) / (2.0 * math.sqrt(3.0))
    centre = d / 2.0
    last = (n - 1) // 2 if n % 2 else n // 2 - 1
    return [centre + scale * normal_quantile(i / n) for i in range(1, last + 1)]


def _assemble_symmetric(d: int, n: int, lower: list[float]) -> tuple[float, ...]:
    # mirror the strictly-lower half so that r_i + r_{n-i} = d exactly
    cuts = list(lower)
    if n % 2 == 0:
        cuts.append(d / 2.0)
    for i in range(len(lower) - 1, -1, -1):
        cuts.append(d - lower[i])
    return tuple(cuts)


def normal_approx_partition(d: int, n: int) -> Partition:
    """Approximate equal-volume partition from normal quantiles.

    r_i = d/2 + (sqrt(d)/(2 sqrt(3))) * quantile(i/n).  The upper half is
    mirrored from the lower half, so the symmetry r_i + r_{n-i} = d is exact.
    Raises QuantileRangeError if a cut falls outside (0, d) rather than
    clamping it.
    """
    d = _checked_dim(d)
    n = int(n)
    if d < 2:
        raise ValueError(f"normal approximation needs d >= 2, got {d}")
    if n < 2:
        raise ValueError(f"normal approximation needs n >= 2, got {n}")
    lower = _lower_half_normal(d, n)
    if lower and lower[0] <= 0.0:
        raise QuantileRangeError(
            f"quantile cut r_1 = {lower[0]} fell outside (0, {d}) for d={d}, n={n}"
        )
    return Partition(d=d, cuts=_assemble_symmetric(d, n, lower))


def hybrid_partition(d: int, n: int) -> Partition:
    """Normal-quantile partition with exact cuts in the extreme cube segments.

    Cuts whose target below-volume i/n is at most f(1) = 1/d! admit the closed
    form r = (d! * i/n)^(1/d); mirrored cuts near the opposite corner use
    r = d - (d! * (n-i)/n)^(1/d).  All remaining cuts take the normal-quantile
    value.  Where the quantile value would fall at or below the previous cut
    (the approximation underestimates just past the closed-form segment), the
    cut is replaced by the exact root for its target volume, keeping the cut
    sequence strictly increasing.
    """
    d = _checked_dim(d)
    n = int(n)
    if d < 2:
        raise ValueError(f"hybrid construction needs d >= 2, got {d}")
    if n < 2:
        raise ValueError(f"hybrid construction needs n >= 2, got {n}")
    fact = math.factorial(d)
    scale = math.sqrt(d) / (2.0 * math.sqrt(3.0))
    centre = d / 2.0
    last = (n - 1) // 2 if n % 2 else n // 2 - 1
    lower: list[float] = []
    prev = 0.0
    for i in range(1, last + 1):
        if i * fact <= n:
            r = (fact * i / n) ** (1.0 / d)
        else:
            r = centre + scale * normal_quantile(i / n)
            if r <= prev:
                r = _solve_below(d, i / n, _DEFAULT_TOL)
        lower.append(r)
        prev = r
    if lower and lower[0] <= 0.0:
        raise QuantileRangeError(
            f"hybrid cut r_1 = {lower[0]} fell outside (0, {d}) for d={d}, n={n}"
        )
    return Partition(d=d, cuts=_assemble_symmetric(d, n, lower))


def berry_esseen_bound(d: int) -> float:
    """Uniform bound on the normal-approximation error of the below-volume.

    0.4748 * (2 sqrt(3))^3 / (32 sqrt(d)); approximately 0.6167/sqrt(d).
    """
    d = _checked_dim(d)
    return 0.4748 * (2.0 * math.sqrt(3.0)) ** 3 / (32.0 * math.sqrt(d))
