"""Experiment reports: convergence, deviation, comparison, scoring, KDE."""

import math

import numpy as np
import pytest
from scipy.stats import norm

from diagslice.discrepancy import StratifiedSource, expected_l2_star_sq
from diagslice.errors import QuantileRangeError
from diagslice.experiments import (
    ExperimentReport,
    comparison_table,
    convergence_experiment,
    kde_summary,
    score_point_set,
    volume_deviation_experiment,
)
from diagslice.geometry import (
    DiagonalCoords,
    berry_esseen_bound,
    equivolume_partition,
    to_diagonal,
)
from diagslice.rng import RngSpec


# -------------------------------------------------------------- convergence

def test_convergence_trivial_case_is_exact():
    rep = convergence_experiment([2], 2)
    assert len(rep.records) == 1
    assert rep.records[0] == {"d": 2, "i": 1, "error": 0.0}
    assert rep.summary[0]["sup_error"] == 0.0


def test_convergence_errors_shrink_with_dimension():
    rep = convergence_experiment([3, 5], 500)
    assert [row["d"] for row in rep.summary] == [3, 5]
    sup3, sup5 = (row["sup_error"] for row in rep.summary)
    assert sup5 < sup3
    for row in rep.summary:
        assert row["sup_error"] <= row["bound"]
        assert row["bound"] == berry_esseen_bound(row["d"])
        # the observed gap sits far below the guaranteed bound
        assert row["sup_error"] < 0.2 * row["bound"]
    assert len(rep.records) == 2 * 499
    assert set(rep.records[0]) == {"d", "i", "error"}


def test_convergence_error_against_external_normal_cdf():
    # equal-volume cuts satisfy V(r_i) = i/N, so the recorded error should
    # match |i/N - Phi(z_i)| computed with an independent CDF
    d, N = 3, 40
    rep = convergence_experiment([d], N)
    cuts = equivolume_partition(d, N).cuts
    for row, r in zip(rep.records, cuts):
        z = 2.0 * math.sqrt(3.0 * d) * (r / d - 0.5)
        expected = abs(row["i"] / N - norm.cdf(z))
        assert row["error"] == pytest.approx(expected, abs=5e-12)


def test_convergence_reproducible_and_validated():
    a = convergence_experiment([3], 50)
    b = convergence_experiment([3], 50)
    assert a.records == b.records and a.summary == b.summary
    with pytest.raises(ValueError):
        convergence_experiment([3], 1)


# ----------------------------------------------------------------- deviation

def test_deviation_trivial_case():
    rep = volume_deviation_experiment(2, [2])
    assert len(rep.records) == 2
    assert rep.records[0]["deviation"] == 0.0
    assert rep.records[1]["deviation"] == 0.0
    # both extreme indices coincide at slice 1 for N=2
    assert rep.records[0]["flagged"] == 1
    assert rep.records[1]["flagged"] == 0


def test_deviation_flags_and_interior_error():
    rep = volume_deviation_experiment(5, [1000])
    s = rep.summary[0]
    assert (s["flag_lo"], s["flag_hi"]) == (9, 991)
    flagged = [row["i"] for row in rep.records if row["flagged"]]
    assert flagged == [9, 991]
    assert s["max_rel_interior"] <= 0.08
    assert len(rep.records) == 1000
    assert set(rep.records[0]) == {"N", "i", "deviation", "flagged"}
    # deviations sum to zero: slice volumes add up to one
    total = math.fsum(row["deviation"] for row in rep.records)
    assert abs(total) < 1e-12


def test_deviation_propagates_range_errors():
    # one tail quantile falls outside the open cube range at d=2, N=200
    with pytest.raises(QuantileRangeError):
        volume_deviation_experiment(2, [200])


# ---------------------------------------------------------------- comparison

def test_comparison_baseline_only():
    rep = comparison_table(2, [3, 5], 400, [], budget=1)
    assert [row["N"] for row in rep.records] == [3, 5]
    row = rep.records[0]
    assert set(row) == {"N", "iid_analytic", "iid_mean", "iid_se",
                        "equivolume_mean", "equivolume_se", "pct_iid"}
    for row in rep.records:
        assert abs(row["iid_mean"] - row["iid_analytic"]) < 4.0 * row["iid_se"]
        assert row["equivolume_mean"] < row["iid_mean"]
        expected_pct = 100.0 * (row["iid_mean"] - row["equivolume_mean"]) \
            / row["equivolume_mean"]
        assert row["pct_iid"] == expected_pct


def test_comparison_with_optimizer_column():
    rep = comparison_table(2, [3], 150, ["es"], budget=8,
                           runs=2, lowfi_reps=100, master_seed=3)
    row = rep.records[0]
    assert {"es_mean", "es_se", "pct_es"} <= set(row)
    assert 0.0 < row["es_mean"] < 1.0
    base = row["equivolume_mean"]
    assert row["pct_es"] == 100.0 * (row["es_mean"] - base) / base
    assert rep.parameters["optimizers"] == ["es"]


def test_comparison_accepts_full_algorithm_names():
    rep = comparison_table(2, [3], 120, ["one_plus_one_es"], budget=4,
                           runs=1, lowfi_reps=100)
    assert "es_mean" in rep.records[0]
    with pytest.raises(ValueError):
        comparison_table(2, [3], 120, ["simulated_annealing"], budget=4)


def test_comparison_validation_and_determinism():
    with pytest.raises(ValueError):
        comparison_table(2, [3], 99, [], budget=1)
    a = comparison_table(2, [4], 150, [], budget=1, master_seed=9)
    b = comparison_table(2, [4], 150, [], budget=1, master_seed=9)
    assert a.records == b.records


# ------------------------------------------------------------------- scoring

def test_score_point_set_matches_equivolume_estimate():
    part = equivolume_partition(2, 3)
    p = to_diagonal(part).p
    spec = RngSpec(17, stream_id=0)
    direct = expected_l2_star_sq(StratifiedSource(part), 500, spec)
    scored = score_point_set(2, p, 500, spec)
    assert scored == direct


def test_score_point_set_reference_value():
    # listed best set for d=2, N=3 scores about 0.02696
    est = score_point_set(2, (0.525326, 1.094506), 4000, RngSpec(23, stream_id=0))
    combined = math.sqrt(2.0) * est.se
    assert abs(est.mean - 0.02696) < 4.0 * combined


def test_score_point_set_rejects_out_of_range():
    # 1.414214 rounds above sqrt(2): the listed set cannot be scored
    with pytest.raises(ValueError):
        score_point_set(2, (0.385772, 1.414214), 200, RngSpec(1, stream_id=0))


# ----------------------------------------------------------------------- kde

def test_kde_single_point_mass_peaks_at_point():
    rep = kde_summary([DiagonalCoords(d=2, p=(0.7,))], grid=283)
    xs = np.array([row["grid_point"] for row in rep.records])
    dens = np.array([row["density"] for row in rep.records])
    peak = xs[int(dens.argmax())]
    assert abs(peak - 0.7) <= (math.sqrt(2.0) / 282) / 2 + 1e-15


def test_kde_symmetric_set_gives_symmetric_density():
    limit = math.sqrt(2.0)
    p = tuple(sorted((0.3, limit / 2.0, limit - 0.3)))
    rep = kde_summary([DiagonalCoords(d=2, p=p)], grid=257)
    dens = np.array([row["density"] for row in rep.records])
    assert np.abs(dens - dens[::-1]).max() < 1e-12


def test_kde_multiple_sets_and_validation():
    sets = [DiagonalCoords(d=3, p=(0.5, 1.0)), DiagonalCoords(d=3, p=(0.9,))]
    rep = kde_summary(sets, grid=64)
    assert len(rep.records) == 2 * 64
    assert {row["set"] for row in rep.records} == {0, 1}
    assert rep.parameters == {"d": 3, "grid": 64, "sets": 2}
    with pytest.raises(ValueError):
        kde_summary([], grid=64)
    with pytest.raises(ValueError):
        kde_summary(sets + [DiagonalCoords(d=2, p=(0.5,))], grid=64)
    with pytest.raises(ValueError):
        kde_summary(sets, grid=1)


# -------------------------------------------------------------------- report

def test_report_requires_records():
    with pytest.raises(ValueError):
        ExperimentReport(experiment="t", parameters={}, records=(),
                         seeds={}, wall_clock=0.0, version="0")
