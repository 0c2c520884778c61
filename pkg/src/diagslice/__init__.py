"""diagslice: equal-volume diagonal slicing of the unit cube.

Partitions [0,1]^d with hyperplanes orthogonal to the main diagonal, draws
stratified samples from the slices, scores point sets by exact squared L2
star discrepancy, and tunes cut positions with evolution strategies.
"""

from ._version import __version__
from .discrepancy import (
    DiscrepancyEstimate,
    IidSource,
    StratifiedSource,
    expected_l2_star_sq,
    iid_expected_l2_star_sq,
    l2_star_sq,
)
from .errors import NumericError, QuantileRangeError, SamplingError
from .experiments import (
    ExperimentReport,
    comparison_table,
    convergence_experiment,
    kde_summary,
    score_point_set,
    volume_deviation_experiment,
)
from .geometry import (
    MAX_DIMENSION,
    DiagonalCoords,
    Partition,
    VolumeBreakpoints,
    berry_esseen_bound,
    breakpoints,
    equivolume_partition,
    from_diagonal,
    hybrid_partition,
    normal_approx_partition,
    normal_cdf,
    normal_quantile,
    solve_offset,
    to_diagonal,
    volume_above,
    volume_below,
)
from .optimize import (
    OptimizerConfig,
    OptimizerRun,
    best_of_runs,
    evaluate_candidate,
    optimize,
    run_diagonal_cma,
    run_one_plus_one_es,
    sort_project,
)
from .report import default_filename, write_report
from .rng import RngSpec, derive_seed
from .sampling import PointSet, sample_iid, sample_stratified, stratum_indices

__all__ = [
    "MAX_DIMENSION",
    "DiagonalCoords",
    "DiscrepancyEstimate",
    "ExperimentReport",
    "IidSource",
    "NumericError",
    "OptimizerConfig",
    "OptimizerRun",
    "Partition",
    "PointSet",
    "QuantileRangeError",
    "RngSpec",
    "SamplingError",
    "StratifiedSource",
    "VolumeBreakpoints",
    "berry_esseen_bound",
    "best_of_runs",
    "breakpoints",
    "comparison_table",
    "convergence_experiment",
    "default_filename",
    "derive_seed",
    "equivolume_partition",
    "evaluate_candidate",
    "expected_l2_star_sq",
    "from_diagonal",
    "hybrid_partition",
    "iid_expected_l2_star_sq",
    "kde_summary",
    "l2_star_sq",
    "normal_approx_partition",
    "normal_cdf",
    "normal_quantile",
    "optimize",
    "run_diagonal_cma",
    "run_one_plus_one_es",
    "sample_iid",
    "sample_stratified",
    "score_point_set",
    "solve_offset",
    "sort_project",
    "stratum_indices",
    "to_diagonal",
    "volume_above",
    "volume_below",
    "volume_deviation_experiment",
    "write_report",
    "__version__",
]
