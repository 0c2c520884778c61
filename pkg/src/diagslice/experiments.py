"""Scripted, seeded numerical studies producing tabular reports.

Each experiment returns an :class:`ExperimentReport` whose records are plain
dict rows with a fixed column set, ready for CSV or JSON serialization.
Reports are reproducible bit for bit from (experiment id, parameters, master
seed); the wall-clock field is informational only and is never serialized.

Seed derivation inside an experiment is hierarchical: a per-N seed comes
from derive_seed(master_seed, N), and roles within that N (iid estimate,
equivolume estimate, k-th optimizer) use derive_seed(per_N_seed, role).
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np

from ._version import __version__
from .discrepancy import (
    DiscrepancyEstimate,
    IidSource,
    StratifiedSource,
    expected_l2_star_sq,
    iid_expected_l2_star_sq,
)
from .geometry import (
    DiagonalCoords,
    berry_esseen_bound,
    equivolume_partition,
    from_diagonal,
    normal_approx_partition,
    normal_cdf,
    _volume_below_array,
)
from .optimize import OptimizerConfig, best_of_runs
from .rng import RngSpec, derive_seed

__all__ = [
    "ExperimentReport",
    "OPTIMIZER_ALIASES",
    "convergence_experiment",
    "volume_deviation_experiment",
    "comparison_table",
    "score_point_set",
    "kde_summary",
]

# short CLI-friendly names for the optimizer algorithms
OPTIMIZER_ALIASES = {"es": "one_plus_one_es", "cma": "diagonal_cma"}


@dataclass(frozen=True)
class ExperimentReport:
    """Tabular outcome of one experiment.

    ``records`` rows all share one column set; ``summary`` (when present)
    holds a small derived table with its own columns.  ``wall_clock`` is in
    seconds and excluded from serialization so that emitted files depend
    only on the inputs and seeds.
    """

    experiment: str
    parameters: dict
    records: tuple[dict, ...]
    seeds: dict
    wall_clock: float
    version: str
    summary: tuple[dict, ...] = field(default=())

    def __post_init__(self):
        if not self.records:
            raise ValueError("an experiment report needs at least one record")


def _finish(experiment: str, parameters: dict, records: list, seeds: dict,
            started: float, summary: tuple | list = ()) -> ExperimentReport:
    return ExperimentReport(
        experiment=experiment,
        parameters=dict(parameters),
        records=tuple(records),
        seeds=dict(seeds),
        wall_clock=time.perf_counter() - started,
        version=__version__,
        summary=tuple(summary),
    )


def convergence_experiment(dims: list, N: int) -> ExperimentReport:
    """Error of the normal approximation at equal-volume cut positions.

    For each dimension, places the N-1 equal-volume cuts r_i and records
    error_i = |V(r_i) - Phi(2*sqrt(3d)*(r_i/d - 1/2))|, the gap between the
    exact negative-half-space volume and the standardized normal CDF.  The
    summary holds the sup-error per dimension next to its guaranteed bound.
    """
    if N < 2:
        raise ValueError(f"need N >= 2, got {N}")
    started = time.perf_counter()
    records = []
    summary = []
    for d in dims:
        part = equivolume_partition(d, N)
        r = np.asarray(part.cuts)
        exact = _volume_below_array(d, r)
        z = 2.0 * math.sqrt(3.0 * d) * (r / d - 0.5)
        approx = np.array([normal_cdf(v) for v in z])
        err = np.abs(exact - approx)
        records.extend({"d": d, "i": i, "error": float(e)}
                       for i, e in enumerate(err, start=1))
        summary.append({"d": d, "sup_error": float(err.max()),
                        "bound": berry_esseen_bound(d)})
    return _finish("convergence", {"dims": list(dims), "N": N},
                   records, {}, started, summary)


def volume_deviation_experiment(d: int, Ns: list) -> ExperimentReport:
    """Per-slice volume deviation of the normal-approximation partition.

    Records deviation_i = volume_i - 1/N for each slice.  The two indices
    ceil(N/d!) and N - ceil(N/d!) bound the range where the approximation is
    trustworthy; rows at exactly those indices carry flagged=1.  Range errors
    from the underlying construction (cuts pushed outside the open cube
    range) propagate to the caller.
    """
    if any(n < 2 for n in Ns):
        raise ValueError("every N must be >= 2")
    started = time.perf_counter()
    fact = math.factorial(d)
    records = []
    summary = []
    for N in Ns:
        part = normal_approx_partition(d, N)
        vols = np.asarray(part.volumes)
        dev = vols - 1.0 / N
        lo = math.ceil(N / fact)
        hi = N - lo
        for i, v in enumerate(dev, start=1):
            records.append({"N": N, "i": i, "deviation": float(v),
                            "flagged": 1 if i in (lo, hi) else 0})
        interior = dev[lo - 1:hi] if hi >= lo else dev
        summary.append({
            "N": N, "flag_lo": lo, "flag_hi": hi,
            "max_abs_deviation": float(np.abs(dev).max()),
            "max_rel_interior": float(np.abs(interior).max() * N),
        })
    return _finish("deviation", {"d": d, "Ns": list(Ns)},
                   records, {}, started, summary)


def _normalize_optimizers(optimizers: list) -> list[tuple[str, str]]:
    """Return (column alias, algorithm name) pairs, accepting either form."""
    by_algorithm = {v: k for k, v in OPTIMIZER_ALIASES.items()}
    out = []
    for name in optimizers:
        if name in OPTIMIZER_ALIASES:
            out.append((name, OPTIMIZER_ALIASES[name]))
        elif name in by_algorithm:
            out.append((by_algorithm[name], name))
        else:
            raise ValueError(f"unknown optimizer {name!r}; "
                             f"expected one of {sorted(OPTIMIZER_ALIASES)} "
                             f"or {sorted(by_algorithm)}")
    return out


def comparison_table(d: int, Ns: list, reps: int, optimizers: list,
                     budget: int, *, runs: int = 10, lowfi_reps: int = 1500,
                     master_seed: int = 0) -> ExperimentReport:
    """Expected squared discrepancy of competing point-set constructions.

    Per N: the closed-form iid value, estimated iid and equivolume values
    with standard errors, and for each requested optimizer the best of
    ``runs`` independent searches re-scored at ``reps`` repetitions.
    Percentage columns give the change relative to the equivolume estimate,
    pct_x = 100*(x_mean - equivolume_mean)/equivolume_mean, and recompute
    exactly from the absolute columns.  An empty optimizer list yields the
    baseline-only table.
    """
    if reps < 100:
        raise ValueError(f"need reps >= 100 for table estimates, got {reps}")
    pairs = _normalize_optimizers(optimizers)
    started = time.perf_counter()
    records = []
    for N in Ns:
        seed_n = derive_seed(master_seed, N)
        iid_est = expected_l2_star_sq(
            IidSource(d, N), reps, RngSpec(derive_seed(seed_n, 0), stream_id=0))
        equi_est = expected_l2_star_sq(
            StratifiedSource(equivolume_partition(d, N)), reps,
            RngSpec(derive_seed(seed_n, 1), stream_id=0))
        row = {
            "N": N,
            "iid_analytic": iid_expected_l2_star_sq(d, N),
            "iid_mean": iid_est.mean, "iid_se": iid_est.se,
            "equivolume_mean": equi_est.mean, "equivolume_se": equi_est.se,
        }
        for k, (alias, algorithm) in enumerate(pairs):
            cfg = OptimizerConfig(
                d=d, n=N, algorithm=algorithm, budget=budget,
                lowfi_reps=lowfi_reps, hifi_reps=reps,
                master_seed=derive_seed(seed_n, 2 + k))
            best = best_of_runs(cfg, runs)
            row[f"{alias}_mean"] = best.best_hifi.mean
            row[f"{alias}_se"] = best.best_hifi.se
        base = row["equivolume_mean"]
        row["pct_iid"] = 100.0 * (row["iid_mean"] - base) / base
        for alias, _ in pairs:
            row[f"pct_{alias}"] = 100.0 * (row[f"{alias}_mean"] - base) / base
        records.append(row)
    parameters = {"d": d, "Ns": list(Ns), "reps": reps,
                  "optimizers": [alias for alias, _ in pairs],
                  "budget": budget, "runs": runs, "lowfi_reps": lowfi_reps}
    return _finish("comparison", parameters, records,
                   {"master": master_seed}, started)


def score_point_set(d: int, p, reps: int, rng: RngSpec) -> DiscrepancyEstimate:
    """Estimate the expected squared discrepancy of a listed cut set.

    ``p`` holds diagonal coordinates, sorted within [0, sqrt(d)].  The set is
    converted to a partition and scored by stratified sampling; validation
    and sampling errors propagate (a listed set with a cut at the cube's far
    corner, for example, cannot be scored).
    """
    coords = DiagonalCoords(d=d, p=tuple(float(v) for v in p))
    source = StratifiedSource(from_diagonal(coords))
    return expected_l2_star_sq(source, reps, rng)


def kde_summary(p_sets: list, grid: int = 256) -> ExperimentReport:
    """Gaussian-kernel density estimate of each cut set on a common grid.

    All sets must share one dimension d; densities are evaluated on a
    uniform grid of ``grid`` points spanning [0, sqrt(d)].  Bandwidth follows
    Scott's rule (sample std times n^(-1/5)), floored at sqrt(d)/1000 so
    that single-point sets keep a finite, sharply peaked density.
    """
    if not p_sets:
        raise ValueError("need at least one cut set")
    if grid < 2:
        raise ValueError(f"need at least two grid points, got {grid}")
    d = p_sets[0].d
    if any(s.d != d for s in p_sets):
        raise ValueError("all cut sets must share the same dimension")
    started = time.perf_counter()
    limit = math.sqrt(d)
    xs = np.linspace(0.0, limit, grid)
    records = []
    for s_idx, coords in enumerate(p_sets):
        vals = np.asarray(coords.p)
        n = vals.size
        spread = float(np.std(vals, ddof=1)) if n > 1 else 0.0
        bw = max(spread * n ** (-0.2), limit / 1000.0)
        dens = np.exp(-0.5 * ((xs[:, None] - vals[None, :]) / bw) ** 2)
        dens = dens.sum(axis=1) / (n * bw * math.sqrt(2.0 * math.pi))
        records.extend({"set": s_idx, "grid_point": float(x), "density": float(v)}
                       for x, v in zip(xs, dens))
    parameters = {"d": d, "grid": grid, "sets": len(p_sets)}
    return _finish("kde", parameters, records, {}, started)
