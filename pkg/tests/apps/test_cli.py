"""Tests for the ``rogers-engine`` command-line front end."""

from __future__ import annotations

import json
import math
from typing import Any

import pytest

from rogers_engine.adapters.reports import JsonReportSink, read_reports
from rogers_engine.apps.cli import (
    EXIT_DOMAIN,
    EXIT_FAILED,
    EXIT_NONCONVERGENT,
    EXIT_OK,
    build_parser,
    expand_suites,
    main,
    parse_complex,
    parse_complex_list,
    resolve_config,
)
from rogers_engine.core.exceptions import NonConvergent
from rogers_engine.core.identities import STRUCTURAL_SUITES, IdentityId
from rogers_engine.core.models import VerificationReport
from rogers_engine.services import suites
from rogers_engine.services.qcore import qpoch_infinite


def _real(value: Any) -> float:
    return value["re"] if isinstance(value, dict) else float(value)


def _payload(capsys: pytest.CaptureFixture[str]) -> dict[str, Any]:
    return json.loads(capsys.readouterr().out)


def test_parse_complex_accepts_real_and_complex_text():
    """Numbers may be real or written with a ``j`` suffix."""
    assert parse_complex("0.3") == 0.3
    assert parse_complex("0.3+0.1j") == 0.3 + 0.1j
    assert parse_complex_list("0.1, -2,") == (0.1, -2.0)
    assert parse_complex_list("") == ()


def test_eval_qpoch_finite(capsys):
    """``(0.3;0.5)_3`` is a product of three factors."""
    code = main(["eval", "qpoch", "--a", "0.3", "--q", "0.5", "--n", "3"])
    payload = _payload(capsys)
    assert code == EXIT_OK
    assert payload["kind"] == "qpoch"
    assert _real(payload["value"]) == pytest.approx(0.7 * 0.85 * 0.925, rel=1e-14)
    assert payload["converged"] is True


def test_eval_poly_chebyshev(capsys):
    """``T_5(cos 1.5) = cos 7.5``."""
    code = main(["eval", "poly", "--family", "chebyshev_t", "--n", "5", "--x", repr(math.cos(1.5))])
    payload = _payload(capsys)
    assert code == EXIT_OK
    assert _real(payload["value"]) == pytest.approx(math.cos(7.5), abs=1e-13)


def test_eval_phi_q_binomial(capsys):
    """``1phi0(a;-;q,z)`` is the q-binomial product."""
    code = main(["eval", "phi", "--num", "0.4", "--q", "0.5", "--z", "0.5"])
    payload = _payload(capsys)
    expected = qpoch_infinite(0.2, 0.5).value / qpoch_infinite(0.5, 0.5).value
    assert code == EXIT_OK
    assert _real(payload["value"]) == pytest.approx(expected.real, rel=1e-12)


def test_eval_hyp_arcsine(capsys):
    """``2F1(1/2,1/2;3/2;1/4) = arcsin(1/2)/(1/2)``."""
    code = main(["eval", "hyp", "--num", "0.5,0.5", "--den", "1.5", "--z", "0.25"])
    assert code == EXIT_OK
    assert _real(_payload(capsys)["value"]) == pytest.approx(math.pi / 3.0, rel=1e-13)


def test_eval_weight(capsys):
    """The Legendre weight is one inside the interval."""
    assert main(["eval", "weight", "--family", "legendre", "--x", "0.3"]) == EXIT_OK
    assert _real(_payload(capsys)["value"]) == pytest.approx(1.0)


def test_eval_domain_error_exits_two(capsys):
    """A base outside the unit disc is a domain violation."""
    code = main(["eval", "qpoch", "--a", "0.3", "--q", "1.5", "--infinite"])
    assert code == EXIT_DOMAIN
    assert "error:" in capsys.readouterr().err


def test_eval_divergent_series_exits_three(capsys):
    """A divergent series reports non-convergence."""
    code = main(["eval", "phi", "--num", "0.2,0.3", "--den", "0.4", "--q", "0.5", "--z", "1.5"])
    assert code == EXIT_NONCONVERGENT
    assert "error:" in capsys.readouterr().err


def test_list_suites(capsys):
    """Structural suites come first, then identity suites with their summaries."""
    assert main(["list-suites"]) == EXIT_OK
    lines = capsys.readouterr().out.splitlines()
    assert lines[: len(STRUCTURAL_SUITES)] == list(STRUCTURAL_SUITES)
    assert any(line.startswith("rogers_gf\t") for line in lines)
    assert len(lines) == len(STRUCTURAL_SUITES) + len(IdentityId)


def test_expand_suites_replaces_all_once():
    """``all`` expands in place and later duplicates are dropped."""
    expanded = expand_suites(["connection", "all"])
    assert expanded[0] == "connection"
    assert expanded.count("connection") == 1
    assert len(expanded) == len(STRUCTURAL_SUITES) + len(IdentityId)


def test_verify_to_file_then_summary(tmp_path, capsys):
    """A report written by ``verify`` can be summarised again later."""
    output = tmp_path / "reports" / "inequalities.json"
    code = main(["verify", "--suite", "inequalities", "--output", str(output)])
    out = capsys.readouterr().out
    assert code == EXIT_OK
    assert out.splitlines()[-1] == "3/3 checks passed"
    reports = read_reports(output)
    assert {r.suite for r in reports} == {"inequalities"}

    assert main(["summary", str(output)]) == EXIT_OK
    assert capsys.readouterr().out == out


def test_verify_without_output_prints_the_document(capsys):
    """Without ``--output`` the report goes to stdout and the table to stderr."""
    code = main(["verify", "--suite", "connection", "--timings"])
    captured = capsys.readouterr()
    rows = json.loads(captured.out)
    assert code == EXIT_OK
    assert [row["id"] for row in rows] == ["connection"]
    assert "wall_time_ms" in rows[0]
    assert "1/1 checks passed" in captured.err


def test_verify_unknown_suite_exits_two(capsys):
    """Unknown suite names are rejected as configuration errors."""
    assert main(["verify", "--suite", "no_such_suite"]) == EXIT_DOMAIN
    assert "unknown suites" in capsys.readouterr().err


def test_verify_writes_reports_when_a_suite_raises(tmp_path, monkeypatch, capsys):
    """A suite that raises is reported as failed and the other suites' reports are still written."""

    def stalled(_request, _services):
        raise NonConvergent("quadrature did not settle")

    monkeypatch.setitem(suites.STRUCTURAL_RUNNERS, "integrals", stalled)
    output = tmp_path / "partial.json"
    code = main(["verify", "--suite", "qbinomial", "--suite", "integrals", "--output", str(output)])
    capsys.readouterr()
    assert code == EXIT_FAILED
    reports = read_reports(output)
    assert [r.id for r in reports] == ["qbinomial", "integrals:aborted"]
    assert reports[0].passed
    assert reports[1].suite == "integrals"
    assert not reports[1].passed


def test_flags_override_config_file(tmp_path):
    """Command-line flags win over the config file, which wins over defaults."""
    config = tmp_path / "run.toml"
    config.write_text(
        'suites = ["qbinomial"]\nseed = 3\nformat = "csv"\n\n[grids.rogers_gf]\nn_terms = 40\n',
        encoding="utf-8",
    )
    args = build_parser().parse_args(["verify", "--config", str(config), "--seed", "9"])
    resolved = resolve_config(args)
    assert resolved.suites == ["qbinomial"]
    assert resolved.seed == 9
    assert resolved.format == "csv"
    assert resolved.grids["rogers_gf"].n_terms == 40
    assert resolved.timings is False


def test_json_config_file(tmp_path, capsys):
    """JSON configs are accepted and CSV output is read back by suffix."""
    config = tmp_path / "run.json"
    output = tmp_path / "out.csv"
    config.write_text(json.dumps({"suites": ["qbinomial"], "format": "csv"}), encoding="utf-8")
    assert main(["verify", "--config", str(config), "--output", str(output)]) == EXIT_OK
    capsys.readouterr()
    assert [r.id for r in read_reports(output)] == ["qbinomial"]


def test_broken_config_file_exits_two(tmp_path, capsys):
    """Unreadable or malformed configs are configuration errors."""
    bad = tmp_path / "bad.toml"
    bad.write_text("suites = [", encoding="utf-8")
    assert main(["verify", "--config", str(bad)]) == EXIT_DOMAIN
    assert main(["verify", "--config", str(tmp_path / "missing.toml")]) == EXIT_DOMAIN
    extra = tmp_path / "extra.json"
    extra.write_text(json.dumps({"suites": ["qbinomial"], "colour": "blue"}), encoding="utf-8")
    assert main(["verify", "--config", str(extra)]) == EXIT_DOMAIN
    capsys.readouterr()


def test_summary_of_failing_report_exits_one(tmp_path, capsys):
    """``summary`` exits one when any stored check failed."""
    path = tmp_path / "failed.json"
    failing = VerificationReport(
        suite="demo", id="demo", samples=1, max_rel_residual=1.0, converged_fraction=1.0, tol_rel=1e-10
    )
    JsonReportSink(path).write([failing])
    assert main(["summary", str(path)]) == EXIT_FAILED
    assert "0/1 checks passed" in capsys.readouterr().out


def test_integrate_one_minus_x_at_zero_exponent(capsys):
    """``nu = 0`` reduces the Jacobi corollary to orthogonality."""
    code = main(
        ["integrate", "--cor", "jacobi_1mx", "--n", "2", "--alpha", "0.5", "--beta", "0.5", "--nu", "0"]
    )
    payload = _payload(capsys)
    assert code == EXIT_OK
    assert payload["cor"] == "jacobi_1mx"
    assert payload["q"] is None
    assert abs(_real(payload["quadrature"])) < 1e-12
    assert payload["rel_residual"] < 1e-12


def test_version_flag(capsys):
    """``--version`` prints the package version and exits cleanly."""
    with pytest.raises(SystemExit) as excinfo:
        main(["--version"])
    assert excinfo.value.code == 0
    assert capsys.readouterr().out.strip()


def test_integrate_gegenbauer_stieltjes(capsys):
    """The Gegenbauer Stieltjes corollary matches its closed form at degree three."""
    code = main(
        ["integrate", "--cor", "gegen_stieltjes", "--mu", "0.7", "--lambda", "0.4", "--t", "0.25", "--n", "3"]
    )
    payload = _payload(capsys)
    assert code == EXIT_OK
    assert payload["cor"] == "gegen_stieltjes"
    assert payload["rel_residual"] < 1e-8


def test_integrate_continuous_q_ultraspherical(capsys):
    """The q-ultraspherical corollary matches its closed form at degree two."""
    code = main(
        ["integrate", "--cor", "cqultra", "--n", "2", "--beta", "0.3", "--gamma", "0.5", "--q", "0.5", "--t", "0.25"]
    )
    payload = _payload(capsys)
    assert code == EXIT_OK
    assert _real(payload["q"]) == 0.5
    assert payload["rel_residual"] < 1e-8
