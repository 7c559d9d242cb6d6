"""Numerical services and the suite-runner scaffolding that wires them together."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from rogers_engine.core.models import TruncationPolicy
from rogers_engine.core.ports import ReportSinkPort
from rogers_engine.services.suite_router import SuiteRouter


@dataclass(slots=True)
class ServiceContainer:
    """Aggregate of services available to suite runners."""

    report_sink: Optional[ReportSinkPort] = None
    suite_router: Optional["SuiteRouter"] = None
    policy: TruncationPolicy = field(default_factory=TruncationPolicy.from_settings)


def build_default_services(
    *,
    report_sink: Optional[ReportSinkPort] = None,
    policy: Optional[TruncationPolicy] = None,
) -> ServiceContainer:
    """Return a service container with every default suite registered."""
    # Imported here: suites pulls in every numerical service module.
    from rogers_engine.services.suites import register_default_suites

    suite_router = SuiteRouter()
    register_default_suites(suite_router)
    return ServiceContainer(
        report_sink=report_sink,
        suite_router=suite_router,
        policy=policy or TruncationPolicy.from_settings(),
    )


__all__ = ["ServiceContainer", "build_default_services"]
