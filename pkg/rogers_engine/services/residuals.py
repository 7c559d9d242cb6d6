"""Relative residuals and the tracker that folds them into a report.

A residual is ``|target - approx| / max(|target|, REL_FLOOR)``. A sample
outside an operation's domain is recorded with residual ``inf``; a sample
whose series or quadrature did not converge lowers ``converged_fraction``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Mapping

import numpy as np
from numpy.typing import ArrayLike, NDArray

from rogers_engine.core.exceptions import DomainViolation, NonConvergent, PoleError
from rogers_engine.core.logging import get_logger
from rogers_engine.core.models import VerificationReport

logger = get_logger(__name__)

REL_FLOOR = 1e-30

FAILURE_ERRORS: tuple[type[Exception], ...] = (DomainViolation, PoleError)
NUMERICAL_ERRORS: tuple[type[Exception], ...] = (DomainViolation, PoleError, NonConvergent)


def relative_residual(target: ArrayLike, approx: ArrayLike, scale: float = REL_FLOOR) -> NDArray[np.float64]:
    """Elementwise ``|target - approx| / max(|target|, scale)``."""

    t = np.asarray(target)
    return np.abs(t - np.asarray(approx)) / np.maximum(np.abs(t), scale)


def relative_error(target: complex, approx: complex, scale: float = REL_FLOOR) -> float:
    """Scalar form of :func:`relative_residual`.

    Cross-checks of two evaluations on a grid that passes through a root pass
    the largest value on the grid as ``scale``.
    """

    return float(abs(target - approx) / max(abs(target), scale))


def plain(value: Any) -> Any:
    """Real numbers as floats, complex numbers as ``{"re", "im"}``."""

    if isinstance(value, (complex, np.complexfloating)):
        value = complex(value)
        return value.real if value.imag == 0 else {"re": value.real, "im": value.imag}
    if isinstance(value, np.floating):
        return float(value)
    return value


def plain_map(values: Mapping[str, Any]) -> dict[str, Any]:
    return {key: plain(value) for key, value in values.items()}


@dataclass(slots=True)
class ResidualTracker:
    """Running maximum of residuals with the point that produced it."""

    report_id: str
    tol_rel: float
    samples: int = 0
    converged: int = 0
    worst: float = -math.inf
    worst_point: dict[str, Any] = field(default_factory=dict)
    n_terms_used: int = 0

    def add(self, residual: float, point: Mapping[str, Any], *, converged: bool = True) -> None:
        """Record one sample."""
        self.samples += 1
        self.converged += int(converged)
        if residual > self.worst or math.isnan(residual):
            self.worst = math.inf if math.isnan(residual) else residual
            self.worst_point = plain_map(point)

    def fail(self, point: Mapping[str, Any], exc: Exception) -> None:
        """Record a sample outside the operation's domain."""
        logger.warning("[verifier] %s: %s at %s", self.report_id, exc, dict(point))
        self.samples += 1
        self.converged += 1
        self.worst = math.inf
        self.worst_point = {**plain_map(point), "error": f"{type(exc).__name__}: {exc}"}

    def nonconvergent(self, point: Mapping[str, Any], exc: Exception) -> None:
        """Record a sample whose series or quadrature did not converge."""
        logger.warning("[verifier] %s did not converge: %s", self.report_id, exc)
        self.samples += 1
        if self.worst < math.inf:
            self.worst_point = {**plain_map(point), "error": f"{type(exc).__name__}: {exc}"}

    def record_error(self, point: Mapping[str, Any], exc: Exception) -> None:
        """Dispatch a numerical error to :meth:`nonconvergent` or :meth:`fail`."""
        if isinstance(exc, NonConvergent):
            self.nonconvergent(point, exc)
        else:
            self.fail(point, exc)

    def report(self, *, params: Mapping[str, Any] | None = None, grid: Mapping[str, Any] | None = None) -> VerificationReport:
        """Aggregate everything recorded so far."""
        return VerificationReport(
            id=self.report_id,
            samples=self.samples,
            max_rel_residual=max(self.worst, 0.0),
            worst_point=self.worst_point,
            n_terms_used=self.n_terms_used,
            converged_fraction=self.converged / self.samples if self.samples else 1.0,
            tol_rel=self.tol_rel,
            params=dict(params or {}),
            grid=dict(grid or {}),
        )


def aborted_report(report_id: str, exc: Exception) -> VerificationReport:
    """A failed report standing in for a check that raised before producing one."""

    return VerificationReport(
        id=report_id,
        samples=0,
        max_rel_residual=math.inf,
        worst_point={"error": f"{type(exc).__name__}: {exc}"},
        converged_fraction=0.0,
        tol_rel=1.0,
    )


__all__ = [
    "REL_FLOOR",
    "FAILURE_ERRORS",
    "NUMERICAL_ERRORS",
    "relative_residual",
    "relative_error",
    "plain",
    "plain_map",
    "ResidualTracker",
    "aborted_report",
]
