"""Application bootstrap helpers for assembling the service container."""

from __future__ import annotations

from pathlib import Path
from typing import Optional

from rogers_engine.adapters.reports import ReportFormat, report_sink
from rogers_engine.core.models import TruncationPolicy
from rogers_engine.services import ServiceContainer, build_default_services


def build_default_service_container(
    fmt: ReportFormat = "json",
    output_path: Optional[Path] = None,
    policy: Optional[TruncationPolicy] = None,
) -> ServiceContainer:
    """Assemble the service container used by one CLI invocation."""

    return build_default_services(report_sink=report_sink(fmt, output_path), policy=policy)


__all__ = ["build_default_service_container"]
