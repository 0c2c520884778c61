"""Searching for cut positions that minimise expected squared discrepancy.

Candidates are raw vectors in R^(n-1) read through sort-projection: clamp to
[0, sqrt(d)], sort ascending.  Degenerate candidates (ties, cuts at the
domain ends, strata too thin to sample) score +inf instead of erroring, so
the evaluation budget accounting stays exact.

Randomness addressing within one run: stream 0 of the master seed drives the
search moves (including the random initial candidate), evaluation e draws
its repetitions from stream e+1, and the final high-fidelity re-score uses
stream budget+1.  Every draw therefore has a fixed address and runs are
reproducible from the config alone.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .discrepancy import DiscrepancyEstimate, StratifiedSource, expected_l2_star_sq
from .errors import SamplingError
from .geometry import MAX_DIMENSION, DiagonalCoords, from_diagonal
from .rng import RngSpec, derive_seed

__all__ = [
    "OptimizerConfig",
    "OptimizerRun",
    "ALGORITHMS",
    "sort_project",
    "evaluate_candidate",
    "optimize",
    "run_one_plus_one_es",
    "run_diagonal_cma",
    "best_of_runs",
]

ALGORITHMS = ("one_plus_one_es", "diagonal_cma")

# multiplicative 1/5-rule: equilibrium at a 1-in-5 success rate
_ES_SUCCESS = math.exp(1.0 / 3.0)
_ES_FAILURE = math.exp(-1.0 / 12.0)


@dataclass(frozen=True)
class OptimizerConfig:
    """Search instance: partition shape, algorithm, budgets, and seed."""

    d: int
    n: int
    algorithm: str = "one_plus_one_es"
    budget: int = 1000
    lowfi_reps: int = 1500
    hifi_reps: int = 10000
    master_seed: int = 0

    def __post_init__(self):
        if not 2 <= self.d <= MAX_DIMENSION:
            raise ValueError(f"need 2 <= d <= {MAX_DIMENSION}, got {self.d}")
        if self.n < 2:
            raise ValueError(f"need at least 2 strata to place a cut, got n={self.n}")
        if self.algorithm not in ALGORITHMS:
            raise ValueError(f"algorithm must be one of {ALGORITHMS}, got {self.algorithm!r}")
        if self.budget < 1:
            raise ValueError(f"budget must be >= 1, got {self.budget}")
        if self.lowfi_reps < 2 or self.hifi_reps < 2:
            raise ValueError("lowfi_reps and hifi_reps must be >= 2")

    @property
    def dim(self) -> int:
        """Dimension of the search space (number of cuts)."""
        return self.n - 1

    @property
    def bound(self) -> float:
        """Upper limit of each search coordinate."""
        return math.sqrt(self.d)


@dataclass(frozen=True)
class OptimizerRun:
    """Outcome of one seeded search.

    ``trajectory`` holds (evaluation index, best-so-far low-fidelity value)
    pairs; ``best_lowfi_se`` is the standard error attached to the winning
    low-fidelity evaluation, kept so the winner's-curse gap between
    best_lowfi and best_hifi can be judged against the evaluation noise.
    """

    config: OptimizerConfig
    best_candidate: DiagonalCoords
    best_lowfi: float
    best_lowfi_se: float
    best_hifi: DiscrepancyEstimate
    trajectory: tuple[tuple[int, float], ...]
    eval_count: int


def sort_project(x, d: int) -> DiagonalCoords:
    """Clamp coordinates to [0, sqrt(d)] and sort ascending.

    Idempotent and permutation invariant; the result is always a valid
    DiagonalCoords, though possibly one with ties that sampling rejects.
    """
    limit = math.sqrt(d)
    arr = np.clip(np.asarray(x, dtype=float), 0.0, limit)
    arr.sort()
    return DiagonalCoords(d=d, p=tuple(arr.tolist()))


# Per-repetition draw cap while scoring candidates.  Nearly-degenerate cut
# lists are legal but can need ~50/volume draws per repetition; capping makes
# them fail fast and score +inf instead of stalling the search.
_EVAL_MAX_DRAWS = 200_000


def _estimate_candidate(candidate: DiagonalCoords, reps: int, rng: RngSpec,
                        threads: int | None,
                        max_draws: int | None = None) -> DiscrepancyEstimate | None:
    try:
        source = StratifiedSource(from_diagonal(candidate), max_draws=max_draws)
    except (ValueError, SamplingError):
        return None
    try:
        return expected_l2_star_sq(source, reps, rng, threads=threads)
    except SamplingError:
        return None


def evaluate_candidate(candidate: DiagonalCoords, reps: int, rng: RngSpec,
                       *, threads: int | None = None) -> float:
    """Estimated expected squared discrepancy of a candidate's stratified sample.

    Degenerate candidates (unsampleable partitions) return +inf.
    """
    est = _estimate_candidate(candidate, reps, rng, threads)
    return math.inf if est is None else est.mean


@dataclass
class _EngineResult:
    best_x: np.ndarray
    best_f: float
    best_idx: int
    evals: int
    sigma: float


def _one_plus_one_es(objective, x0: np.ndarray, sigma0: float, budget: int,
                     gen: np.random.Generator) -> _EngineResult:
    """Elitist single-parent search with the multiplicative 1/5-rule."""
    x = np.array(x0, dtype=float)
    fx = objective(x)
    evals = 1
    best_x, best_f, best_idx = x.copy(), fx, 0
    sigma = sigma0
    while evals < budget:
        child = x + sigma * gen.standard_normal(x.size)
        fc = objective(child)
        if fc < best_f:
            best_x, best_f, best_idx = child.copy(), fc, evals
        evals += 1
        if fc <= fx:
            x, fx = child, fc
            sigma *= _ES_SUCCESS
        else:
            sigma *= _ES_FAILURE
    return _EngineResult(best_x, best_f, best_idx, evals, sigma)


def _diagonal_cma(objective, x0: np.ndarray, sigma0: float, budget: int,
                  gen: np.random.Generator) -> _EngineResult:
    """CMA-ES restricted to a diagonal covariance, with cumulative step-size
    adaptation and a rank-one update of the coordinate variances.

    The budget counts individuals; a final generation that does not fit the
    remaining budget is still evaluated (for best tracking) but no longer
    updates the distribution.
    """
    dim = x0.size
    lam = max(4, 4 + int(3.0 * math.log(dim)))
    mu = lam // 2
    w = np.log(mu + 0.5) - np.log(np.arange(1, mu + 1))
    w /= w.sum()
    mueff = 1.0 / float((w ** 2).sum())
    cs = (mueff + 2.0) / (dim + mueff + 5.0)
    damps = 1.0 + 2.0 * max(0.0, math.sqrt((mueff - 1.0) / (dim + 1.0)) - 1.0) + cs
    cc = (4.0 + mueff / dim) / (dim + 4.0 + 2.0 * mueff / dim)
    c_cov = 2.0 / ((dim + math.sqrt(2.0)) ** 2) * (dim + 2.0) / 3.0
    chi_n = math.sqrt(dim) * (1.0 - 1.0 / (4.0 * dim) + 1.0 / (21.0 * dim * dim))

    mean = np.array(x0, dtype=float)
    sigma = sigma0
    var = np.ones(dim)
    ps = np.zeros(dim)
    pc = np.zeros(dim)
    evals = 0
    generation = 0
    best_x = mean.copy()
    best_f = math.inf
    best_idx = 0
    while evals < budget:
        m = min(lam, budget - evals)
        z = gen.standard_normal((m, dim))
        xs = mean + sigma * np.sqrt(var) * z
        fs = np.empty(m)
        for i in range(m):
            fs[i] = objective(xs[i])
            if fs[i] < best_f:
                best_x, best_f, best_idx = xs[i].copy(), float(fs[i]), evals + i
        evals += m
        if m < lam:
            break
        generation += 1
        order = np.argsort(fs, kind="stable")[:mu]
        zmean = w @ z[order]
        new_mean = w @ xs[order]
        ps = (1.0 - cs) * ps + math.sqrt(cs * (2.0 - cs) * mueff) * zmean
        ps_norm = float(np.linalg.norm(ps))
        expected = math.sqrt(1.0 - (1.0 - cs) ** (2 * generation))
        hsig = 1.0 if ps_norm / expected < (1.4 + 2.0 / (dim + 1.0)) * chi_n else 0.0
        pc = (1.0 - cc) * pc + hsig * math.sqrt(cc * (2.0 - cc) * mueff) \
            * (new_mean - mean) / sigma
        var = (1.0 - c_cov) * var \
            + c_cov * (pc * pc + (1.0 - hsig) * cc * (2.0 - cc) * var)
        np.maximum(var, 1e-20, out=var)
        mean = new_mean
        sigma *= math.exp((cs / damps) * (ps_norm / chi_n - 1.0))
    return _EngineResult(best_x, best_f, best_idx, evals, sigma)


_ENGINES = {"one_plus_one_es": _one_plus_one_es, "diagonal_cma": _diagonal_cma}


def optimize(config: OptimizerConfig) -> OptimizerRun:
    """Run the configured search and re-score its best candidate.

    The search starts from a uniform-random sorted candidate.  Within the
    run, evaluations are single-process; parallelise across independent runs
    instead (see :func:`best_of_runs`).
    """
    gen = RngSpec(config.master_seed, stream_id=0).generator()
    evals_log: list[tuple[float, float]] = []

    def objective(x) -> float:
        e = len(evals_log)
        candidate = sort_project(x, config.d)
        est = _estimate_candidate(
            candidate, config.lowfi_reps,
            RngSpec(config.master_seed, stream_id=e + 1), threads=1,
            max_draws=_EVAL_MAX_DRAWS)
        if est is None:
            evals_log.append((math.inf, math.inf))
            return math.inf
        evals_log.append((est.mean, est.se))
        return est.mean

    x0 = np.sort(gen.random(config.dim) * config.bound)
    sigma0 = 0.3 * config.bound / math.sqrt(config.dim)
    result = _ENGINES[config.algorithm](objective, x0, sigma0, config.budget, gen)

    best_candidate = sort_project(result.best_x, config.d)
    hifi = _estimate_candidate(
        best_candidate, config.hifi_reps,
        RngSpec(config.master_seed, stream_id=config.budget + 1), threads=1,
        max_draws=_EVAL_MAX_DRAWS)
    if hifi is None:
        raise SamplingError(
            "the search never found a sampleable candidate "
            f"(d={config.d}, n={config.n}, budget={config.budget})")

    trajectory = []
    best = math.inf
    for e, (mean, _) in enumerate(evals_log):
        best = min(best, mean)
        trajectory.append((e, best))
    return OptimizerRun(
        config=config,
        best_candidate=best_candidate,
        best_lowfi=result.best_f,
        best_lowfi_se=evals_log[result.best_idx][1],
        best_hifi=hifi,
        trajectory=tuple(trajectory),
        eval_count=result.evals,
    )


def run_one_plus_one_es(config: OptimizerConfig) -> OptimizerRun:
    """Run :func:`optimize` with the elitist 1/5-rule strategy."""
    return optimize(replace(config, algorithm="one_plus_one_es"))


def run_diagonal_cma(config: OptimizerConfig) -> OptimizerRun:
    """Run :func:`optimize` with the diagonal-covariance CMA strategy."""
    return optimize(replace(config, algorithm="diagonal_cma"))


def best_of_runs(config: OptimizerConfig, runs: int) -> OptimizerRun:
    """Best of several independent runs, judged by high-fidelity mean.

    Run k uses the master seed derived from (config.master_seed, k), so the
    set of runs is reproducible and individual runs can be re-examined.
    """
    if runs < 1:
        raise ValueError(f"need at least one run, got {runs}")
    best: OptimizerRun | None = None
    for k in range(runs):
        run = optimize(replace(config, master_seed=derive_seed(config.master_seed, k)))
        if best is None or run.best_hifi.mean < best.best_hifi.mean:
            best = run
    return best
