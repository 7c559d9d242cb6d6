"""Tests for relative residuals and the residual tracker."""

from __future__ import annotations

import math

import numpy as np
import pytest

from rogers_engine.core.exceptions import DomainViolation, NonConvergent
from rogers_engine.services.residuals import (
    REL_FLOOR,
    ResidualTracker,
    aborted_report,
    relative_error,
    relative_residual,
)


def test_relative_error_uses_target_magnitude_down_to_the_floor():
    """Small targets are compared relative to themselves, not to one."""
    assert relative_error(1e-3, 1e-3 + 1e-12) == pytest.approx(1e-9, rel=1e-6)
    assert relative_error(0.0, 1e-40) == pytest.approx(1e-40 / REL_FLOOR)


def test_relative_error_scale_for_grids_through_roots():
    """An explicit scale replaces the floor when the target sits on a root."""
    assert relative_error(0.0, 1e-17, scale=2.0) == pytest.approx(5e-18)
    assert relative_error(4.0, 3.0, scale=2.0) == pytest.approx(0.25)


def test_relative_residual_elementwise():
    """The array form applies the same rule to every entry."""
    values = relative_residual(np.array([2.0, 1e-6]), np.array([1.0, 2e-6]))
    assert values == pytest.approx([0.5, 1.0])


def test_tracker_keeps_worst_point():
    """The tracker reports the largest residual and where it occurred; one unconverged sample fails it."""
    tracker = ResidualTracker("demo", 1e-6)
    tracker.add(1e-9, {"x": 0.1})
    tracker.add(1e-7, {"x": 0.2}, converged=False)
    tracker.add(1e-8, {"x": 0.3})
    report = tracker.report(params={"beta": 0.3})
    assert report.max_rel_residual == pytest.approx(1e-7)
    assert report.worst_point == {"x": 0.2}
    assert report.samples == 3
    assert report.converged_fraction == pytest.approx(2 / 3)
    assert report.params == {"beta": 0.3}
    assert not report.passed


def test_tracker_nan_counts_as_infinite():
    """A NaN residual fails the check."""
    tracker = ResidualTracker("demo", 1e-6)
    tracker.add(float("nan"), {"x": 0.5})
    assert math.isinf(tracker.report().max_rel_residual)
    assert not tracker.report().passed


def test_tracker_records_domain_failures():
    """A domain failure forces an infinite residual and keeps the error text."""
    tracker = ResidualTracker("demo", 1e-6)
    tracker.add(1e-12, {"x": 0.1})
    tracker.fail({"z": 0.5}, DomainViolation("bad z"))
    report = tracker.report()
    assert math.isinf(report.max_rel_residual)
    assert report.worst_point["error"] == "DomainViolation: bad z"
    assert report.converged_fraction == 1.0


def test_tracker_records_nonconvergence():
    """Unconverged samples lower the converged fraction."""
    tracker = ResidualTracker("demo", 1e-6)
    tracker.add(1e-12, {"x": 0.1})
    tracker.nonconvergent({"x": 0.2}, NonConvergent("slow"))
    report = tracker.report()
    assert report.samples == 2
    assert report.converged_fraction == pytest.approx(0.5)
    assert not report.passed


def test_empty_tracker_reports_zero():
    """With no samples the residual is zero and everything counts as converged."""
    report = ResidualTracker("demo", 1e-6).report()
    assert report.max_rel_residual == 0.0
    assert report.converged_fraction == 1.0


def test_record_error_dispatches_by_exception():
    """Domain errors fail the check; non-convergence lowers the converged fraction."""
    tracker = ResidualTracker("demo", 1e-6)
    tracker.record_error({"x": 0.1}, NonConvergent("slow"))
    assert tracker.report().converged_fraction == 0.0
    assert tracker.report().max_rel_residual == 0.0
    tracker.record_error({"x": 0.2}, DomainViolation("bad x"))
    report = tracker.report()
    assert math.isinf(report.max_rel_residual)
    assert report.converged_fraction == pytest.approx(0.5)


def test_aborted_report_fails():
    """A check that raised is reported as failed with the error text."""
    report = aborted_report("integrals:aborted", NonConvergent("quadrature stalled"))
    assert report.id == "integrals:aborted"
    assert report.samples == 0
    assert math.isinf(report.max_rel_residual)
    assert report.worst_point == {"error": "NonConvergent: quadrature stalled"}
    assert not report.passed
