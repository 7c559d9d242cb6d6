"""Protocol definitions for infrastructure adapters."""

# pylint: disable=unnecessary-ellipsis

from __future__ import annotations

from pathlib import Path
from typing import Protocol, Sequence

from rogers_engine.core.models import VerificationReport


class ReportSinkPort(Protocol):
    """Port persisting verification reports and reading them back."""

    def write(self, reports: Sequence[VerificationReport], *, timings: bool = False) -> str:
        """Serialize ``reports`` and return the rendered document."""
        ...

    def read(self, path: Path) -> list[VerificationReport]:
        """Parse a previously written report file."""
        ...


__all__ = ["ReportSinkPort"]
