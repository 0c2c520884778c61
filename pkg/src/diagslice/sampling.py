"""Drawing points from the cube: one uniform point per stratum, or plain i.i.d.

Stratified draws use batched rejection.  Uniform points are classified by
coordinate sum into strata (each stratum is closed at its lower cut) and the
first point to land in each stratum is kept, so for an equal-volume partition
filling all n strata is coupon collecting and costs about n log n draws.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import SamplingError
from .geometry import Partition
from .rng import RngSpec

__all__ = ["PointSet", "sample_stratified", "sample_iid", "stratum_indices"]

# Rejection sampling starves on very thin strata; refuse below this volume.
_MIN_STRATUM_VOLUME = 1e-9
# Draw budget per sample: this many times the expected hits for the rarest
# stratum, so spurious starvation has probability around exp(-50).
_DRAW_BUDGET_FACTOR = 50
# Hard ceiling on the default budget so a barely-legal stratum fails in
# seconds instead of grinding for hours.
_MAX_DEFAULT_DRAWS = 10 ** 8
# Rejection batches double up to this size; keeps the Python loop short
# when the budget is large.
_MAX_BATCH = 1 << 16


def _as_generator(rng) -> np.random.Generator:
    if isinstance(rng, np.random.Generator):
        return rng
    if isinstance(rng, RngSpec):
        return rng.generator()
    raise TypeError(f"rng must be an RngSpec or numpy Generator, got {type(rng).__name__}")


@dataclass
class PointSet:
    """Points in [0,1]^d, optionally labelled with the stratum each lies in."""

    d: int
    points: np.ndarray
    strata: np.ndarray | None = None

    def __post_init__(self):
        d = int(self.d)
        if d < 1:
            raise ValueError(f"dimension must be >= 1, got {d}")
        self.d = d
        pts = np.array(self.points, dtype=float, order="C")
        if pts.ndim != 2 or pts.shape[1] != d:
            raise ValueError(f"points must have shape (n, {d}), got {pts.shape}")
        if pts.size and (pts.min() < 0.0 or pts.max() > 1.0):
            raise ValueError("points must lie in the unit cube")
        pts.setflags(write=False)
        self.points = pts
        if self.strata is not None:
            s = np.array(self.strata, dtype=np.int64)
            if s.shape != (pts.shape[0],):
                raise ValueError(
                    f"strata must have shape ({pts.shape[0]},), got {s.shape}")
            s.setflags(write=False)
            self.strata = s

    @property
    def n(self) -> int:
        return self.points.shape[0]


def stratum_indices(partition: Partition, points: np.ndarray) -> np.ndarray:
    """Stratum index of each point (row) under the partition.

    A point whose coordinate sum equals a cut exactly belongs to the stratum
    above the cut.
    """
    pts = np.asarray(points, dtype=float)
    cuts = np.asarray(partition.cuts)
    return np.searchsorted(cuts, pts.sum(axis=1), side="right")


def _fill_strata(cuts: np.ndarray, d: int, n: int,
                 gen: np.random.Generator, max_draws: int) -> np.ndarray:
    out = np.empty((n, d))
    filled = np.zeros(n, dtype=bool)
    remaining = n
    batch = max(32, 2 * n)
    drawn = 0
    while remaining:
        if drawn >= max_draws:
            k = int(np.flatnonzero(~filled)[0])
            raise SamplingError(
                f"no point landed in stratum {k} after {drawn} draws", stratum=k)
        m = min(batch, max_draws - drawn)
        pts = gen.random((m, d))
        drawn += m
        batch = min(batch * 2, _MAX_BATCH)
        idx = np.searchsorted(cuts, pts.sum(axis=1), side="right")
        uniq, first = np.unique(idx, return_index=True)
        need = ~filled[uniq]
        for k, i in zip(uniq[need], first[need]):
            out[k] = pts[i]
        filled[uniq] = True
        remaining = n - int(filled.sum())
    return out


def _draw_budget(volumes) -> tuple[float, int, int]:
    vol_min = min(volumes)
    k_min = volumes.index(vol_min)
    budget = math.ceil(_DRAW_BUDGET_FACTOR / max(vol_min, 1e-300))
    return vol_min, k_min, min(budget, _MAX_DEFAULT_DRAWS)


def sample_stratified(partition: Partition, rng,
                      *, max_draws: int | None = None) -> PointSet:
    """One uniform point from each stratum of the partition.

    Points come back in stratum order (row k lies in stratum k).  Raises
    SamplingError when a stratum is thinner than the rejection floor or when
    the draw budget runs out before every stratum is hit; ``max_draws``
    overrides the budget.
    """
    gen = _as_generator(rng)
    vol_min, k_min, budget = _draw_budget(partition.volumes)
    if vol_min < _MIN_STRATUM_VOLUME:
        raise SamplingError(
            f"stratum {k_min} has volume {vol_min:.3e}, below the rejection "
            f"floor {_MIN_STRATUM_VOLUME}", stratum=k_min)
    if max_draws is None:
        max_draws = budget
    n = partition.n_strata
    cuts = np.asarray(partition.cuts)
    points = _fill_strata(cuts, partition.d, n, gen, max_draws)
    return PointSet(d=partition.d, points=points, strata=np.arange(n))


def sample_iid(d: int, n: int, rng) -> PointSet:
    """n independent uniform points in [0,1]^d."""
    d = int(d)
    n = int(n)
    if d < 1:
        raise ValueError(f"dimension must be >= 1, got {d}")
    if n < 1:
        raise ValueError(f"need at least one point, got {n}")
    gen = _as_generator(rng)
    return PointSet(d=d, points=gen.random((n, d)))
