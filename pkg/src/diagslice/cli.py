"""Command-line surface for partitions, samples, discrepancies, searches,
and experiments.

Exit codes: 0 success, 2 usage or validation error, 3 numeric failure,
4 sampling degeneracy.  All randomness derives from --seed, so any
invocation with a fixed seed is byte-reproducible.  The environment variable
DIAGSLICE_THREADS caps estimator parallelism.

A config file in key=value form (one per line, # comments) can supply any
long option of the chosen subcommand, e.g. ``dim=3`` for --dim; values given
as flags override the file.  When --format is not given, a .csv or .json
suffix on --out picks the format.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass
from pathlib import Path

from .discrepancy import IidSource, StratifiedSource, expected_l2_star_sq
from .errors import NumericError, QuantileRangeError, SamplingError
from .experiments import (
    OPTIMIZER_ALIASES,
    comparison_table,
    convergence_experiment,
    kde_summary,
    score_point_set,
    volume_deviation_experiment,
)
from .geometry import (
    DiagonalCoords,
    Partition,
    equivolume_partition,
    hybrid_partition,
    normal_approx_partition,
    to_diagonal,
)
from .optimize import OptimizerConfig, optimize
from .report import format_value, write_json, write_report, write_rows
from .rng import RngSpec
from .sampling import sample_stratified

__all__ = ["main"]


class UsageError(Exception):
    """Invalid option combination or missing required value."""


# ------------------------------------------------------------ option parsing

def _int_list(text: str) -> list[int]:
    try:
        return [int(part) for part in text.split(",") if part.strip() != ""]
    except ValueError:
        raise ValueError(f"expected comma-separated integers, got {text!r}")


def _float_list(text: str) -> list[float]:
    try:
        return [float(part) for part in text.split(",") if part.strip() != ""]
    except ValueError:
        raise ValueError(f"expected comma-separated numbers, got {text!r}")


def _algo_list(text: str) -> list[str]:
    return [part.strip() for part in text.split(",") if part.strip() != ""]


def _bool(text: str) -> bool:
    lowered = text.strip().lower()
    if lowered in ("1", "true", "yes", "on"):
        return True
    if lowered in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"expected a boolean, got {text!r}")


@dataclass(frozen=True)
class _Opt:
    long: str
    convert: object = str          # None marks a boolean flag
    default: object = None
    short: str | None = None
    choices: tuple | None = None
    required: bool = False
    help: str = ""

    @property
    def dest(self) -> str:
        return self.long.replace("-", "_")


_METHODS = ("exact", "normal", "hybrid")
_FORMATS = ("csv", "json")
_ALGOS = tuple(OPTIMIZER_ALIASES)

_DIM = _Opt("dim", int, short="-d", required=True, help="dimension d of the cube")
_SEED = _Opt("seed", int, default=0, help="master seed (default 0)")
_OUT = _Opt("out", str, short="-o", help="output path (default stdout)")
_CONFIG = _Opt("config", str, help="key=value file supplying option values")
_METHOD = _Opt("method", str, default="exact", choices=_METHODS,
               help="partition construction (default exact)")
_CUTS = _Opt("cuts", _float_list,
             help="explicit cut positions in sum coordinates, e.g. 0.7,1.0,1.3")
_FIGURES = _Opt("figures", None, default=False,
                help="also render a PNG next to the output file")


def _fmt_opt(default: str) -> _Opt:
    return _Opt("format", str, default=default, choices=_FORMATS,
                help=f"output format (default {default})")


_SUBCOMMANDS: dict[str, list[_Opt]] = {
    "partition": [
        _DIM,
        _Opt("strata", int, short="-N", required=True, help="number of strata N"),
        _METHOD, _fmt_opt("csv"), _OUT, _CONFIG,
    ],
    "sample": [
        _DIM,
        _Opt("strata", int, short="-N", help="number of strata N"),
        _METHOD, _CUTS, _SEED, _fmt_opt("csv"), _OUT, _CONFIG,
    ],
    "discrepancy": [
        _DIM,
        _Opt("strata", int, short="-N",
             help="points per sample (strata for stratified, points for iid)"),
        _Opt("iid", None, default=False,
             help="score iid uniform points instead of stratified ones"),
        _METHOD, _CUTS,
        _Opt("reps", int, default=10000, help="repetitions (default 10000)"),
        _SEED, _fmt_opt("csv"), _OUT, _CONFIG,
    ],
    "optimize": [
        _DIM,
        _Opt("strata", int, short="-N", required=True, help="number of strata N"),
        _Opt("algo", str, default="es", choices=_ALGOS,
             help="search strategy (default es)"),
        _Opt("budget", int, default=1000, help="evaluation budget (default 1000)"),
        _Opt("reps", int, default=1500,
             help="repetitions per search evaluation (default 1500)"),
        _Opt("hifi-reps", int, default=10000,
             help="repetitions for the final re-score (default 10000)"),
        _SEED, _fmt_opt("csv"), _OUT, _CONFIG, _FIGURES,
    ],
    "experiment": [
        _Opt("dims", _int_list, help="dimensions, e.g. 3,5,10 (convergence)"),
        _Opt("dim", int, short="-d", help="dimension d of the cube"),
        _Opt("strata", _int_list, short="-N",
             help="strata counts; a single value or a comma list"),
        _Opt("reps", int, default=10000, help="repetitions (default 10000)"),
        _Opt("algo", _algo_list, default=[],
             help="optimizers for the comparison table, e.g. es,cma"),
        _Opt("budget", int, default=1000, help="evaluation budget (default 1000)"),
        _Opt("runs", int, default=10,
             help="independent searches per optimizer cell (default 10)"),
        _Opt("grid", int, default=256, help="grid points for kde (default 256)"),
        _Opt("sets-file", str,
             help="JSON file with cut sets for kde: a list of p-value lists"),
        _Opt("equivolume", None, default=False,
             help="kde input: equal-volume cut sets for the given -N values"),
        _SEED, _fmt_opt("json"), _OUT, _CONFIG, _FIGURES,
    ],
}

_EXPERIMENT_IDS = ("convergence", "deviation", "comparison", "kde")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="diagslice",
        description="Diagonal slicing of the unit cube: partitions, stratified "
                    "samples, discrepancy estimates, cut optimization, and "
                    "reproducible experiments.")
    subs = parser.add_subparsers(dest="command", required=True)
    for name, opts in _SUBCOMMANDS.items():
        sub = subs.add_parser(name, help=f"{name} subcommand")
        if name == "experiment":
            sub.add_argument("experiment_id", choices=_EXPERIMENT_IDS,
                             help="which study to run")
        for opt in opts:
            flags = ([opt.short] if opt.short else []) + [f"--{opt.long}"]
            if opt.convert is None:
                sub.add_argument(*flags, dest=opt.dest, action="store_true",
                                 default=argparse.SUPPRESS, help=opt.help)
            else:
                kwargs = dict(dest=opt.dest, type=opt.convert,
                              default=argparse.SUPPRESS, help=opt.help)
                if opt.choices:
                    kwargs["choices"] = opt.choices
                sub.add_argument(*flags, **kwargs)
    return parser


def _load_config_file(path: str) -> dict[str, str]:
    values = {}
    try:
        lines = Path(path).read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise UsageError(f"cannot read config file: {exc}")
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected key=value, got {line!r}")
        key, _, value = line.partition("=")
        values[key.strip()] = value.strip()
    return values


def _resolve(args: argparse.Namespace) -> dict:
    """Merge defaults, config-file values, and explicit flags (flags win)."""
    given = vars(args).copy()
    command = given.pop("command")
    opts = {opt.long: opt for opt in _SUBCOMMANDS[command]}
    cfg = {opt.dest: opt.default for opt in opts.values()}
    cfg["command"] = command
    if "experiment_id" in given:
        cfg["experiment_id"] = given.pop("experiment_id")

    explicit = set(given)
    if "config" in given:
        for key, text in _load_config_file(given["config"]).items():
            opt = opts.get(key)
            if opt is None or key == "config":
                raise UsageError(f"unknown config key {key!r} for {command}")
            try:
                value = _bool(text) if opt.convert is None else opt.convert(text)
            except ValueError as exc:
                raise UsageError(f"config key {key!r}: {exc}")
            if opt.choices and value not in opt.choices:
                raise UsageError(f"config key {key!r}: expected one of "
                                 f"{', '.join(opt.choices)}, got {text!r}")
            cfg[opt.dest] = value
            explicit.add(opt.dest)
    cfg.update(given)

    # a .csv/.json suffix on --out picks the format unless --format was given
    if "format" in cfg and "format" not in explicit:
        out = cfg.get("out")
        suffix = Path(out).suffix.lower() if isinstance(out, str) else ""
        if suffix in (".csv", ".json"):
            cfg["format"] = suffix[1:]

    for opt in opts.values():
        if opt.required and cfg[opt.dest] is None:
            raise UsageError(f"missing required option --{opt.long} "
                             f"for {command}")
    return cfg


# ---------------------------------------------------------------- subcommands

def _build_partition(method: str, d: int, n: int) -> Partition:
    builder = {"exact": equivolume_partition,
               "normal": normal_approx_partition,
               "hybrid": hybrid_partition}[method]
    return builder(d, n)


def _partition_from_cfg(cfg: dict) -> Partition:
    if cfg.get("cuts") is not None:
        return Partition(d=cfg["dim"], cuts=tuple(cfg["cuts"]))
    if cfg.get("strata") is None:
        raise UsageError("need either -N/--strata or --cuts")
    return _build_partition(cfg["method"], cfg["dim"], cfg["strata"])


def _figure_path(out: str | None) -> str:
    if out is None or out == "-":
        raise UsageError("--figures requires -o/--out pointing to a file")
    return str(Path(out).with_suffix(".png"))


def cmd_partition(cfg: dict) -> None:
    d, n = cfg["dim"], cfg["strata"]
    part = _build_partition(cfg["method"], d, n)
    limit = math.sqrt(d)
    bounds_r = (0.0,) + part.cuts + (float(d),)
    volumes = part.volumes
    if cfg["format"] == "json":
        write_json({
            "d": d, "n": n, "method": cfg["method"],
            "cuts_r": list(part.cuts),
            "cuts_p": [r / limit for r in part.cuts],
            "volumes": list(volumes),
        }, cfg["out"])
        return
    rows = [{"stratum": k + 1,
             "r_lo": bounds_r[k], "r_hi": bounds_r[k + 1],
             "p_lo": bounds_r[k] / limit, "p_hi": bounds_r[k + 1] / limit,
             "volume": volumes[k]} for k in range(n)]
    write_rows(rows, cfg["out"])


def cmd_sample(cfg: dict) -> None:
    part = _partition_from_cfg(cfg)
    points = sample_stratified(part, RngSpec(cfg["seed"], stream_id=0))
    if cfg["format"] == "json":
        write_json({
            "d": part.d, "n": part.n_strata, "seed": cfg["seed"],
            "strata": [int(s) for s in points.strata],
            "points": [[float(v) for v in row] for row in points.points],
        }, cfg["out"])
        return
    rows = [{"stratum": int(s) + 1,
             **{f"x{j + 1}": float(v) for j, v in enumerate(row)}}
            for s, row in zip(points.strata, points.points)]
    write_rows(rows, cfg["out"])


def cmd_discrepancy(cfg: dict) -> None:
    d, n = cfg["dim"], cfg["strata"]
    if cfg["iid"]:
        if n is None:
            raise UsageError("iid scoring needs -N/--strata (the point count)")
        source, label = IidSource(d, n), "iid"
    else:
        part = _partition_from_cfg(cfg)
        source, label = StratifiedSource(part), "stratified"
        n = part.n_strata
    est = expected_l2_star_sq(source, cfg["reps"], RngSpec(cfg["seed"], stream_id=0))
    row = {"source": label, "d": d, "n": n, "reps": cfg["reps"],
           "seed": cfg["seed"], "mean_sq": est.mean, "se": est.se}
    if cfg["format"] == "json":
        write_json(row, cfg["out"])
    else:
        write_rows([row], cfg["out"])


def cmd_optimize(cfg: dict) -> None:
    if cfg["figures"]:
        _figure_path(cfg["out"])  # fail before the search, not after
    run = optimize(OptimizerConfig(
        d=cfg["dim"], n=cfg["strata"],
        algorithm=OPTIMIZER_ALIASES[cfg["algo"]],
        budget=cfg["budget"], lowfi_reps=cfg["reps"],
        hifi_reps=cfg["hifi_reps"], master_seed=cfg["seed"]))
    candidate = [float(v) for v in run.best_candidate.p]
    if cfg["format"] == "json":
        write_json({
            "algorithm": cfg["algo"], "d": cfg["dim"], "n": cfg["strata"],
            "budget": cfg["budget"], "lowfi_reps": cfg["reps"],
            "hifi_reps": cfg["hifi_reps"], "seed": cfg["seed"],
            "eval_count": run.eval_count,
            "best_lowfi": run.best_lowfi, "best_lowfi_se": run.best_lowfi_se,
            "best_hifi_mean": run.best_hifi.mean,
            "best_hifi_se": run.best_hifi.se,
            "candidate_p": candidate,
            "trajectory": [[e, v] for e, v in run.trajectory],
        }, cfg["out"])
    else:
        row = {"algorithm": cfg["algo"], "d": cfg["dim"], "n": cfg["strata"],
               "budget": cfg["budget"], "seed": cfg["seed"],
               "eval_count": run.eval_count,
               "best_lowfi": run.best_lowfi, "best_lowfi_se": run.best_lowfi_se,
               "best_hifi_mean": run.best_hifi.mean,
               "best_hifi_se": run.best_hifi.se,
               "candidate_p": ";".join(format_value(v) for v in candidate)}
        write_rows([row], cfg["out"])
    if cfg["figures"]:
        from .figures import render_trajectory

        render_trajectory(run.trajectory, _figure_path(cfg["out"]),
                          title=f"{cfg['algo']} search, d={cfg['dim']}, "
                                f"N={cfg['strata']}")


def _single_strata_value(cfg: dict, what: str) -> int:
    values = cfg.get("strata")
    if not values or len(values) != 1:
        raise UsageError(f"{what} needs exactly one -N/--strata value")
    return values[0]


def _kde_sets(cfg: dict) -> list[DiagonalCoords]:
    d = cfg.get("dim")
    if d is None:
        raise UsageError("kde needs -d/--dim")
    if cfg.get("sets_file"):
        try:
            raw = json.loads(Path(cfg["sets_file"]).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read sets file: {exc}")
        if (not isinstance(raw, list) or not raw
                or not all(isinstance(s, list) for s in raw)):
            raise UsageError("sets file must hold a non-empty list of lists")
        return [DiagonalCoords(d=d, p=tuple(float(v) for v in s)) for s in raw]
    if cfg["equivolume"]:
        if not cfg.get("strata"):
            raise UsageError("kde --equivolume needs -N/--strata values")
        return [to_diagonal(equivolume_partition(d, n)) for n in cfg["strata"]]
    raise UsageError("kde needs --sets-file or --equivolume")


def cmd_experiment(cfg: dict) -> None:
    if cfg["figures"]:
        _figure_path(cfg["out"])  # fail before the computation, not after
    which = cfg["experiment_id"]
    if which == "convergence":
        if not cfg.get("dims"):
            raise UsageError("convergence needs --dims, e.g. --dims 3,5,10")
        report = convergence_experiment(cfg["dims"],
                                        _single_strata_value(cfg, "convergence"))
    elif which == "deviation":
        if cfg.get("dim") is None or not cfg.get("strata"):
            raise UsageError("deviation needs -d and -N (one or more values)")
        report = volume_deviation_experiment(cfg["dim"], cfg["strata"])
    elif which == "comparison":
        if cfg.get("dim") is None or not cfg.get("strata"):
            raise UsageError("comparison needs -d and -N (one or more values)")
        report = comparison_table(cfg["dim"], cfg["strata"], cfg["reps"],
                                  cfg["algo"], cfg["budget"], runs=cfg["runs"],
                                  master_seed=cfg["seed"])
    else:
        report = kde_summary(_kde_sets(cfg), cfg["grid"])
    written = write_report(report, cfg["out"], cfg["format"])
    if cfg["figures"]:
        from .figures import render_report

        render_report(report, _figure_path(written or cfg["out"]))


_HANDLERS = {
    "partition": cmd_partition,
    "sample": cmd_sample,
    "discrepancy": cmd_discrepancy,
    "optimize": cmd_optimize,
    "experiment": cmd_experiment,
}


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _resolve(args)
        _HANDLERS[cfg["command"]](cfg)
        return 0
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (NumericError, QuantileRangeError) as exc:
        print(f"numeric error: {exc}", file=sys.stderr)
        return 3
    except SamplingError as exc:
        print(f"sampling error: {exc}", file=sys.stderr)
        return 4
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
