"""Pytest configuration: ensure env vars are set before the engine is imported.

This runs before any tests, so modules can import without local path hacks.
Also load .env before setting defaults so local overrides are honored.
"""

from __future__ import annotations

import os
from pathlib import Path
from typing import Iterator, Sequence

import pytest
from dotenv import load_dotenv

# Load .env first so a developer's QSK_* settings win over the fallbacks below
load_dotenv(override=False)

os.environ.setdefault("QSK_LOG_LEVEL", "warning")
os.environ.setdefault("QSK_THREADS", "1")
os.environ.setdefault("QSK_SEED", "42")

# pylint: disable=wrong-import-position
from rogers_engine.adapters.reports import parse_json, render_json  # noqa: E402
from rogers_engine.core.models import VerificationReport  # noqa: E402
from rogers_engine.core.ports import ReportSinkPort  # noqa: E402
from rogers_engine.services import ServiceContainer  # noqa: E402
from rogers_engine.services.suite_router import SuiteRouter  # noqa: E402


class InMemoryReportSink(ReportSinkPort):
    """Report sink that keeps every written batch for assertions."""

    def __init__(self) -> None:
        self.batches: list[list[VerificationReport]] = []
        self.documents: dict[Path, str] = {}

    def write(self, reports: Sequence[VerificationReport], *, timings: bool = False) -> str:
        self.batches.append(list(reports))
        return render_json(reports, timings=timings)

    def read(self, path: Path) -> list[VerificationReport]:
        return parse_json(self.documents[path])


@pytest.fixture(autouse=True)
def service_container() -> Iterator[ServiceContainer]:
    """Provide a default in-memory service container for tests."""
    container = ServiceContainer(
        report_sink=InMemoryReportSink(),
        suite_router=SuiteRouter(),
    )
    yield container
