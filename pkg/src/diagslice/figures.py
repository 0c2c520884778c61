"""Rendering of experiment reports and optimizer trajectories to PNG files.

Separate from the computation layer on purpose: the CLI imports this module
only when figures were requested, the Agg backend is forced so no display is
needed, and nothing else in the package depends on matplotlib at runtime.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

from .experiments import ExperimentReport  # noqa: E402

__all__ = ["render_report", "render_trajectory"]

_DPI = 150


def _ordered_unique(values):
    seen = {}
    for v in values:
        seen.setdefault(v, None)
    return list(seen)


def _save(fig, path: str) -> str:
    fig.tight_layout()
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)
    return path


def _convergence_figure(report: ExperimentReport):
    fig, ax = plt.subplots(figsize=(7.0, 4.5))
    for entry in report.summary:
        d = entry["d"]
        rows = [r for r in report.records if r["d"] == d]
        line, = ax.semilogy([r["i"] for r in rows], [r["error"] for r in rows],
                            lw=0.9, label=f"d={d}")
        ax.axhline(entry["bound"], color=line.get_color(), ls="--", lw=0.8)
    ax.set_xlabel("cut index i")
    ax.set_ylabel("absolute CDF error")
    ax.set_title("Normal approximation error at equal-volume cuts\n"
                 "(dashed: guaranteed bound)")
    ax.legend()
    return fig


def _deviation_figure(report: ExperimentReport):
    fig, ax = plt.subplots(figsize=(7.0, 4.5))
    for N in _ordered_unique(r["N"] for r in report.records):
        rows = [r for r in report.records if r["N"] == N]
        xs = [r["i"] / N for r in rows]
        ys = [r["deviation"] * N for r in rows]
        line, = ax.plot(xs, ys, lw=0.9, label=f"N={N}")
        for r in rows:
            if r["flagged"]:
                ax.axvline(r["i"] / N, color=line.get_color(), ls=":", lw=0.7)
    ax.set_xlabel("slice index fraction i/N")
    ax.set_ylabel("relative volume deviation")
    ax.set_title("Slice volume deviation of the normal-approximation cuts\n"
                 "(dotted: trusted-range boundaries)")
    ax.legend()
    return fig


def _comparison_figure(report: ExperimentReport):
    fig, ax = plt.subplots(figsize=(7.0, 4.5))
    ns = [row["N"] for row in report.records]
    series = [("iid_analytic", "iid (analytic)"), ("iid_mean", "iid"),
              ("equivolume_mean", "equivolume")]
    series += [(f"{alias}_mean", alias) for alias in report.parameters["optimizers"]]
    for column, label in series:
        ax.plot(ns, [row[column] for row in report.records],
                marker="o", ms=3.5, lw=0.9, label=label)
    ax.set_xlabel("points N")
    ax.set_ylabel("expected squared discrepancy")
    ax.set_yscale("log")
    ax.set_title(f"Point-set comparison, d={report.parameters['d']}")
    ax.legend()
    return fig


def _kde_figure(report: ExperimentReport):
    fig, ax = plt.subplots(figsize=(7.0, 4.5))
    for s in _ordered_unique(r["set"] for r in report.records):
        rows = [r for r in report.records if r["set"] == s]
        ax.plot([r["grid_point"] for r in rows], [r["density"] for r in rows],
                lw=0.9, label=f"set {s}")
    ax.set_xlabel("diagonal coordinate p")
    ax.set_ylabel("density")
    ax.set_title(f"Cut-position density estimates, d={report.parameters['d']}")
    ax.legend()
    return fig


_FIGURES = {
    "convergence": _convergence_figure,
    "deviation": _deviation_figure,
    "comparison": _comparison_figure,
    "kde": _kde_figure,
}


def render_report(report: ExperimentReport, path: str) -> str:
    """Render a report to a PNG file; returns the path written."""
    try:
        build = _FIGURES[report.experiment]
    except KeyError:
        raise ValueError(f"no figure defined for experiment {report.experiment!r}")
    return _save(build(report), path)


def render_trajectory(trajectory, path: str, *, title: str = "Search progress") -> str:
    """Render (evaluation index, best-so-far value) pairs to a PNG file."""
    fig, ax = plt.subplots(figsize=(7.0, 4.5))
    ax.step([e for e, _ in trajectory], [v for _, v in trajectory],
            where="post", lw=1.1)
    ax.set_xlabel("evaluations")
    ax.set_ylabel("best expected squared discrepancy")
    ax.set_yscale("log")
    ax.set_title(title)
    return _save(fig, path)
