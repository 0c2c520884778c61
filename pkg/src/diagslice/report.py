"""Serialization of experiment reports and simple row tables.

CSV output follows RFC 4180: header row, CRLF line endings, quoting only
where needed.  Floats are written with up to 17 significant digits so every
value round-trips exactly.  JSON output is one object per report with the
records as an array of row objects.  Wall-clock time is never serialized;
emitted bytes depend only on the report's inputs and seeds.
"""

from __future__ import annotations

import csv
import io
import json
import os
import sys

from .experiments import ExperimentReport

__all__ = [
    "format_value",
    "rows_to_csv",
    "report_to_csv",
    "report_to_json",
    "default_filename",
    "write_report",
    "write_rows",
    "write_json",
]


def format_value(value) -> str:
    """Render one cell: floats at 17 significant digits, the rest as str()."""
    if isinstance(value, float):
        return format(value, ".17g")
    return str(value)


def _check_uniform(rows) -> tuple:
    header = tuple(rows[0].keys())
    for row in rows:
        if tuple(row.keys()) != header:
            raise ValueError("all rows must share one column set, "
                             f"got {tuple(row.keys())} vs {header}")
    return header


def rows_to_csv(rows, stream) -> None:
    """Write dict rows with a shared column set as RFC 4180 CSV."""
    if not rows:
        raise ValueError("no rows to write")
    header = _check_uniform(rows)
    writer = csv.writer(stream)
    writer.writerow(header)
    for row in rows:
        writer.writerow([format_value(row[k]) for k in header])


def report_to_csv(report: ExperimentReport, stream) -> None:
    """Write a report's records table as CSV (summary rows are JSON-only)."""
    rows_to_csv(report.records, stream)


def _report_object(report: ExperimentReport) -> dict:
    obj = {
        "experiment": report.experiment,
        "version": report.version,
        "parameters": report.parameters,
        "seeds": report.seeds,
        "records": list(report.records),
    }
    if report.summary:
        obj["summary"] = list(report.summary)
    return obj


def report_to_json(report: ExperimentReport, stream) -> None:
    """Write the full report (parameters, seeds, records, summary) as JSON."""
    json.dump(_report_object(report), stream, indent=2)
    stream.write("\n")


def default_filename(report: ExperimentReport, fmt: str = "csv") -> str:
    """Conventional file name <experiment>_<d>d_<N>.<fmt>.

    Multi-valued dimension or size parameters are joined with dashes.
    """
    params = report.parameters

    def tag(single, multi):
        if single in params:
            return str(params[single])
        if multi in params:
            return "-".join(str(v) for v in params[multi])
        return "x"

    return f"{report.experiment}_{tag('d', 'dims')}d_{tag('N', 'Ns')}.{fmt}"


def _render(write, path):
    """Run a stream-writing callback against a path, '-'/None for stdout."""
    if path is None or path == "-":
        # newline-translation must stay off so CSV CRLF endings survive
        buffer = io.StringIO()
        write(buffer)
        sys.stdout.write(buffer.getvalue())
        return None
    with open(path, "w", newline="", encoding="utf-8") as fh:
        write(fh)
    return path


def write_rows(rows, path=None) -> str | None:
    """Write a plain row table as CSV to a path or stdout."""
    return _render(lambda fh: rows_to_csv(rows, fh), path)


def write_json(obj, path=None) -> str | None:
    """Write one JSON object to a path or stdout."""

    def emit(fh):
        json.dump(obj, fh, indent=2)
        fh.write("\n")

    return _render(emit, path)


def write_report(report: ExperimentReport, path=None, fmt: str = "csv") -> str | None:
    """Write a report as ``fmt`` to a path, a directory, or stdout.

    A directory path gets the conventional file name appended.  Returns the
    path actually written, or None when writing to stdout.
    """
    if fmt not in ("csv", "json"):
        raise ValueError(f"format must be csv or json, got {fmt!r}")
    if path is not None and path != "-" and os.path.isdir(path):
        path = os.path.join(path, default_filename(report, fmt))
    if fmt == "csv":
        return _render(lambda fh: report_to_csv(report, fh), path)
    return _render(lambda fh: report_to_json(report, fh), path)
