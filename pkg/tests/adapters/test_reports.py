"""Tests for the JSON and CSV report sinks."""

from __future__ import annotations

import json
import math

import numpy as np
import pytest

from rogers_engine.adapters.reports import (
    REPORT_KEYS,
    CsvReportSink,
    JsonReportSink,
    json_default,
    parse_csv,
    parse_json,
    read_reports,
    render_csv,
    render_json,
    report_sink,
    summary_table,
)
from rogers_engine.core.models import VerificationReport


def _reports() -> list[VerificationReport]:
    return [
        VerificationReport(
            suite="rogers_gf",
            id="rogers_gf",
            samples=66,
            max_rel_residual=3.2e-15,
            worst_point={"beta": 0.3, "t": 0.4, "x": -1.0},
            n_terms_used=60,
            converged_fraction=1.0,
            tol_rel=1e-10,
            params={"samples": [{"beta": 0.3, "t": 0.4, "q": 0.5}]},
            grid={"x_points": [-1.0, 0.0, 1.0], "n_terms": 60},
            wall_time_ms=12.5,
        ),
        VerificationReport(
            suite="heine_classical",
            id="heine_classical:heine",
            samples=4,
            max_rel_residual=math.inf,
            worst_point={"z": 0.5, "error": "BranchDomain: heine needs real z > 1, got 0.5"},
            converged_fraction=1.0,
            tol_rel=1e-10,
        ),
    ]


def test_json_keys_follow_report_order():
    """Objects carry the report keys in their fixed order, without timings by default."""
    rows = json.loads(render_json(_reports()))
    assert list(rows[0]) == list(REPORT_KEYS)
    assert rows[0]["pass"] is True
    assert rows[0]["N_terms"] == 60
    assert rows[1]["pass"] is False


def test_json_timings_are_opt_in():
    """``wall_time_ms`` is appended only on request."""
    rows = json.loads(render_json(_reports(), timings=True))
    assert list(rows[0])[-1] == "wall_time_ms"
    assert rows[0]["wall_time_ms"] == 12.5
    assert rows[1]["wall_time_ms"] is None


def test_json_round_trip_keeps_infinite_residuals():
    """Parsing a rendered document restores every field."""
    parsed = parse_json(render_json(_reports(), timings=True))
    assert parsed == _reports()
    assert math.isinf(parsed[1].max_rel_residual)
    assert not parsed[1].passed


def test_parse_json_requires_a_list():
    """A single object is not a report document."""
    with pytest.raises(ValueError):
        parse_json('{"id": "x"}')


def test_csv_round_trip():
    """CSV embeds nested fields as JSON and parses back to the same reports."""
    text = render_csv(_reports())
    header = text.splitlines()[0].split(",")
    assert header == list(REPORT_KEYS)
    parsed = parse_csv(text)
    assert [r.id for r in parsed] == ["rogers_gf", "heine_classical:heine"]
    assert parsed[0].worst_point == {"beta": 0.3, "t": 0.4, "x": -1.0}
    assert parsed[0].max_rel_residual == 3.2e-15
    assert parsed[0].wall_time_ms is None
    assert math.isinf(parsed[1].max_rel_residual)


def test_csv_timings_column():
    """Missing timings are written as empty cells."""
    parsed = parse_csv(render_csv(_reports(), timings=True))
    assert parsed[0].wall_time_ms == 12.5
    assert parsed[1].wall_time_ms is None


def test_json_default_encodes_complex_and_numpy():
    """Complex values become ``{"re", "im"}``; numpy scalars and arrays become plain values."""
    assert json_default(1.5 - 2j) == {"re": 1.5, "im": -2.0}
    assert json_default(np.complex128(0.25 + 1j)) == {"re": 0.25, "im": 1.0}
    assert json_default(np.float64(0.5)) == 0.5
    assert json_default(np.arange(3)) == [0, 1, 2]
    with pytest.raises(TypeError):
        json_default(object())


def test_summary_table_counts_passes():
    """One line per report and a final pass count."""
    table = summary_table(_reports())
    lines = table.splitlines()
    assert lines[0].startswith("suite")
    assert "PASS" in lines[2] and "rogers_gf" in lines[2]
    assert "FAIL" in lines[3] and " inf " in lines[3]
    assert lines[-1] == "1/2 checks passed"


def test_sinks_persist_and_read_back(tmp_path):
    """Both sinks write to their path and read it back by suffix."""
    json_path = tmp_path / "out" / "reports.json"
    csv_path = tmp_path / "out" / "reports.csv"
    JsonReportSink(json_path).write(_reports())
    CsvReportSink(csv_path).write(_reports())

    assert [r.id for r in read_reports(json_path)] == [r.id for r in _reports()]
    assert [r.id for r in read_reports(csv_path)] == [r.id for r in _reports()]


def test_sink_without_path_only_renders(tmp_path):
    """A sink without a path returns the document and writes nothing."""
    text = report_sink("json").write(_reports())
    assert json.loads(text)[0]["id"] == "rogers_gf"
    assert not list(tmp_path.iterdir())


def test_report_sink_rejects_unknown_format():
    """Only JSON and CSV are supported."""
    with pytest.raises(ValueError):
        report_sink("yaml")  # type: ignore[arg-type]
