"""Squared L2 star discrepancy: exact evaluation and Monte-Carlo expectation.

For a point set P = {p_1..p_N} in [0,1]^d the squared star discrepancy has
the closed form

    3^(-d) - (2/N) sum_k prod_j (1 - p_kj^2)/2
           + (1/N^2) sum_{k,l} prod_j (1 - max(p_kj, p_lj)),

evaluated here exactly.  Expectations over random point sets are estimated by
repeated sampling, one reproducible substream per repetition, so estimates do
not depend on how repetitions are scheduled across worker processes.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import SamplingError
from .geometry import Partition
from .rng import RngSpec
from .sampling import _MIN_STRATUM_VOLUME, PointSet, _draw_budget, _fill_strata

__all__ = [
    "DiscrepancyEstimate",
    "IidSource",
    "StratifiedSource",
    "l2_star_sq",
    "expected_l2_star_sq",
    "iid_expected_l2_star_sq",
]

# crossover between the scalar loop (cheaper for tiny sets, the Monte-Carlo
# hot path) and the vectorised pair evaluation
_PY_LOOP_MAX = 48


def _l2_terms_py(rows: list[list[float]], d: int) -> tuple[float, float]:
    s1 = 0.0
    s2 = 0.0
    n = len(rows)
    for k in range(n):
        pk = rows[k]
        prod1 = 1.0
        proddiag = 1.0
        for x in pk:
            prod1 *= 1.0 - x * x
            proddiag *= 1.0 - x
        s1 += prod1
        s2 += proddiag
        for l in range(k + 1, n):
            pl = rows[l]
            prod = 1.0
            for j in range(d):
                xk = pk[j]
                xl = pl[j]
                prod *= 1.0 - (xk if xk > xl else xl)
            s2 += 2.0 * prod
    return s1, s2


def _l2_terms_np(pts: np.ndarray) -> tuple[float, float]:
    n = pts.shape[0]
    s1 = float(np.prod(1.0 - pts * pts, axis=1).sum())
    # bound the (chunk, n, d) temporary to a few hundred MB
    chunk = max(1, (1 << 22) // max(n * pts.shape[1], 1))
    s2 = 0.0
    for i in range(0, n, chunk):
        block = np.maximum(pts[i:i + chunk, None, :], pts[None, :, :])
        s2 += float(np.prod(1.0 - block, axis=2).sum())
    return s1, s2


def _l2_raw(pts: np.ndarray) -> float:
    n, d = pts.shape
    if n <= _PY_LOOP_MAX:
        s1, s2 = _l2_terms_py(pts.tolist(), d)
    else:
        s1, s2 = _l2_terms_np(pts)
    return math.fsum([3.0 ** -d, -s1 / (n * 2.0 ** (d - 1)), s2 / (n * n)])


def l2_star_sq(points) -> float:
    """Exact squared L2 star discrepancy of a point set in [0,1]^d."""
    pts = points.points if isinstance(points, PointSet) else np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[0] < 1 or pts.shape[1] < 1:
        raise ValueError(f"need a (n, d) array of points, got shape {pts.shape}")
    if pts.min() < 0.0 or pts.max() > 1.0:
        raise ValueError("points must lie in the unit cube")
    return _l2_raw(pts)


def iid_expected_l2_star_sq(d: int, n: int) -> float:
    """Closed-form expectation of the squared discrepancy of n i.i.d. points."""
    d = int(d)
    n = int(n)
    if d < 1 or n < 1:
        raise ValueError(f"need d >= 1 and n >= 1, got d={d}, n={n}")
    return (2.0 ** -d - 3.0 ** -d) / n


@dataclass(frozen=True)
class IidSource:
    """Draws n independent uniform points per repetition."""

    d: int
    n: int

    def __post_init__(self):
        if self.d < 1 or self.n < 1:
            raise ValueError(f"need d >= 1 and n >= 1, got d={self.d}, n={self.n}")

    def draw(self, gen: np.random.Generator) -> np.ndarray:
        return gen.random((self.n, self.d))


class StratifiedSource:
    """Draws one uniform point per stratum of a fixed partition.

    max_draws caps the rejection budget per repetition; a repetition that
    exhausts it raises SamplingError instead of drawing on.
    """

    def __init__(self, partition: Partition, *, max_draws: int | None = None):
        vol_min, k_min, budget = _draw_budget(partition.volumes)
        if vol_min < _MIN_STRATUM_VOLUME:
            raise SamplingError(
                f"stratum {k_min} has volume {vol_min:.3e}, below the rejection "
                f"floor {_MIN_STRATUM_VOLUME}", stratum=k_min)
        if max_draws is not None:
            if max_draws < 1:
                raise ValueError(f"max_draws must be >= 1, got {max_draws}")
            budget = min(budget, int(max_draws))
        self.partition = partition
        self._cuts = np.asarray(partition.cuts)
        self._budget = budget

    @property
    def d(self) -> int:
        return self.partition.d

    @property
    def n(self) -> int:
        return self.partition.n_strata

    def draw(self, gen: np.random.Generator) -> np.ndarray:
        return _fill_strata(self._cuts, self.partition.d, self.partition.n_strata,
                            gen, self._budget)


@dataclass(frozen=True)
class DiscrepancyEstimate:
    """Monte-Carlo mean of the squared discrepancy with its standard error."""

    mean: float
    se: float
    reps: int


def _thread_count() -> int:
    raw = os.environ.get("DIAGSLICE_THREADS", "1").strip()
    try:
        v = int(raw)
    except ValueError:
        raise ValueError(f"DIAGSLICE_THREADS must be an integer, got {raw!r}") from None
    return max(1, v)


def _rep_values(source, spec: RngSpec, start: int, stop: int) -> np.ndarray:
    draw = source.draw
    vals = np.empty(stop - start)
    for i, gen in enumerate(spec.substream_generators(stop - start, start=start)):
        vals[i] = _l2_raw(draw(gen))
    return vals


def expected_l2_star_sq(source, reps: int, rng: RngSpec,
                        *, threads: int | None = None) -> DiscrepancyEstimate:
    """Estimate the expected squared discrepancy of a point-set source.

    Repetition k draws its point set from substream k of ``rng``, and the
    mean is reduced in repetition order, so the result is bit-identical no
    matter how many worker processes run (``threads``, defaulting to the
    DIAGSLICE_THREADS environment variable).
    """
    reps = int(reps)
    if reps < 2:
        raise ValueError(f"need at least 2 repetitions for a standard error, got {reps}")
    if threads is None:
        threads = _thread_count()
    if threads > 1 and reps >= 256:
        bounds = np.linspace(0, reps, threads + 1).astype(int)
        vals = np.empty(reps)
        with ProcessPoolExecutor(max_workers=threads) as pool:
            futures = [pool.submit(_rep_values, source, rng, int(a), int(b))
                       for a, b in zip(bounds, bounds[1:]) if b > a]
            offset = 0
            for fut in futures:
                chunk = fut.result()
                vals[offset:offset + len(chunk)] = chunk
                offset += len(chunk)
    else:
        vals = _rep_values(source, rng, 0, reps)
    as_list = vals.tolist()
    mean = math.fsum(as_list) / reps
    var = math.fsum((v - mean) ** 2 for v in as_list) / (reps - 1)
    return DiscrepancyEstimate(mean=mean, se=math.sqrt(var / reps), reps=reps)
