"""Report sink adapters implementing the report port.

Reports are written as UTF-8 JSON (a list of objects) or CSV (one row per
report, nested fields as embedded JSON). Both layouts keep the same column
order so that report files diff cleanly between runs.
"""

from __future__ import annotations

import csv
import io
import json
import math
from pathlib import Path
from typing import Any, Literal, Optional, Sequence

import numpy as np

from rogers_engine.core.logging import get_logger
from rogers_engine.core.models import VerificationReport
from rogers_engine.core.ports import ReportSinkPort

logger = get_logger(__name__)

ReportFormat = Literal["json", "csv"]

# Stable order; ``wall_time_ms`` is appended only when timings are requested.
REPORT_KEYS: tuple[str, ...] = (
    "suite",
    "id",
    "params",
    "grid",
    "N_terms",
    "max_rel_residual",
    "worst_point",
    "pass",
    "tol_rel",
    "samples",
    "converged_fraction",
)
_NESTED = ("params", "grid", "worst_point")


def json_default(value: Any) -> Any:
    """``json.dumps`` fallback for complex and numpy values."""
    if isinstance(value, (complex, np.complexfloating)):
        value = complex(value)
        return {"re": value.real, "im": value.imag}
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, np.ndarray):
        return value.tolist()
    raise TypeError(f"Object of type {type(value).__name__} is not JSON serializable")


def report_row(report: VerificationReport, *, timings: bool = False) -> dict[str, Any]:
    """Flatten a report into the serialized key order."""

    row: dict[str, Any] = {
        "suite": report.suite,
        "id": report.id,
        "params": report.params,
        "grid": report.grid,
        "N_terms": report.n_terms_used,
        "max_rel_residual": report.max_rel_residual,
        "worst_point": report.worst_point,
        "pass": report.passed,
        "tol_rel": report.tol_rel,
        "samples": report.samples,
        "converged_fraction": report.converged_fraction,
    }
    if timings:
        row["wall_time_ms"] = report.wall_time_ms
    return row


def report_from_row(row: dict[str, Any]) -> VerificationReport:
    """Rebuild a report from a parsed row; the ``pass`` column is recomputed."""

    wall = row.get("wall_time_ms")
    return VerificationReport(
        suite=row.get("suite", ""),
        id=row["id"],
        samples=int(row["samples"]),
        max_rel_residual=float(row["max_rel_residual"]),
        worst_point=row.get("worst_point") or {},
        n_terms_used=int(row.get("N_terms", 0)),
        converged_fraction=float(row["converged_fraction"]),
        tol_rel=float(row["tol_rel"]),
        params=row.get("params") or {},
        grid=row.get("grid") or {},
        wall_time_ms=float(wall) if wall not in (None, "") else None,
    )


def render_json(reports: Sequence[VerificationReport], *, timings: bool = False) -> str:
    """Serialize reports as an indented JSON list."""

    rows = [report_row(r, timings=timings) for r in reports]
    return json.dumps(rows, indent=2, default=json_default) + "\n"


def parse_json(text: str) -> list[VerificationReport]:
    """Parse a JSON report document."""

    rows = json.loads(text)
    if not isinstance(rows, list):
        raise ValueError("report JSON must be a list of report objects")
    return [report_from_row(row) for row in rows]


def render_csv(reports: Sequence[VerificationReport], *, timings: bool = False) -> str:
    """Serialize reports as CSV with nested fields embedded as JSON."""

    columns = [*REPORT_KEYS, *(("wall_time_ms",) if timings else ())]
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=columns, lineterminator="\n")
    writer.writeheader()
    for report in reports:
        row = report_row(report, timings=timings)
        for key in _NESTED:
            row[key] = json.dumps(row[key], sort_keys=False, default=json_default)
        row["max_rel_residual"] = repr(float(row["max_rel_residual"]))
        if timings and row["wall_time_ms"] is None:
            row["wall_time_ms"] = ""
        writer.writerow(row)
    return buffer.getvalue()


def parse_csv(text: str) -> list[VerificationReport]:
    """Parse a CSV report document."""

    reports = []
    for raw in csv.DictReader(io.StringIO(text)):
        row: dict[str, Any] = dict(raw)
        for key in _NESTED:
            row[key] = json.loads(row[key]) if row.get(key) else {}
        reports.append(report_from_row(row))
    return reports


def _residual_text(value: float) -> str:
    return "inf" if math.isinf(value) else f"{value:.3e}"


def summary_table(reports: Sequence[VerificationReport]) -> str:
    """Fixed-width summary of reports, one line each, plus a pass count."""

    header = f"{'suite':<22} {'check':<42} {'residual':>10} {'tol':>10}  status"
    lines = [header, "-" * len(header)]
    for r in reports:
        status = "PASS" if r.passed else "FAIL"
        lines.append(
            f"{r.suite:<22} {r.id:<42} {_residual_text(r.max_rel_residual):>10} {r.tol_rel:>10.1e}  {status}"
        )
    passed = sum(1 for r in reports if r.passed)
    lines.append(f"{passed}/{len(reports)} checks passed")
    return "\n".join(lines) + "\n"


class JsonReportSink(ReportSinkPort):
    """Report sink writing JSON documents."""

    def __init__(self, path: Optional[Path] = None) -> None:
        self.path = path

    def write(self, reports: Sequence[VerificationReport], *, timings: bool = False) -> str:
        text = render_json(reports, timings=timings)
        _persist(self.path, text)
        return text

    def read(self, path: Path) -> list[VerificationReport]:
        return parse_json(path.read_text(encoding="utf-8"))


class CsvReportSink(ReportSinkPort):
    """Report sink writing CSV documents."""

    def __init__(self, path: Optional[Path] = None) -> None:
        self.path = path

    def write(self, reports: Sequence[VerificationReport], *, timings: bool = False) -> str:
        text = render_csv(reports, timings=timings)
        _persist(self.path, text)
        return text

    def read(self, path: Path) -> list[VerificationReport]:
        return parse_csv(path.read_text(encoding="utf-8"))


def _persist(path: Optional[Path], text: str) -> None:
    if path is None:
        return
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")
    logger.info("[reports] wrote %s", path)


def report_sink(fmt: ReportFormat, path: Optional[Path] = None) -> ReportSinkPort:
    """Sink for ``fmt`` writing to ``path`` when one is given."""

    if fmt == "csv":
        return CsvReportSink(path)
    if fmt == "json":
        return JsonReportSink(path)
    raise ValueError(f"unknown report format {fmt!r}")


def read_reports(path: Path) -> list[VerificationReport]:
    """Read a report file, choosing the parser from its suffix."""

    fmt: ReportFormat = "csv" if path.suffix.lower() == ".csv" else "json"
    return report_sink(fmt).read(path)


__all__ = [
    "REPORT_KEYS",
    "json_default",
    "ReportFormat",
    "report_row",
    "report_from_row",
    "render_json",
    "parse_json",
    "render_csv",
    "parse_csv",
    "summary_table",
    "JsonReportSink",
    "CsvReportSink",
    "report_sink",
    "read_reports",
]
