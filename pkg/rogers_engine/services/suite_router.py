"""Suite router and supporting request models."""

from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import TYPE_CHECKING, Callable, Mapping, MutableMapping, Sequence

from rogers_engine.core.logging import get_logger, suite_id_context
from rogers_engine.core.models import GridOverride, VerificationReport
from rogers_engine.services.residuals import NUMERICAL_ERRORS, aborted_report

if TYPE_CHECKING:  # pragma: no cover - import for static analysis only
    from . import ServiceContainer

logger = get_logger(__name__)


@dataclass(slots=True)
class SuiteRequest:
    """One suite invocation with its seed and optional grid override."""

    suite: str
    seed: int
    override: GridOverride | None = None


SuiteHandler = Callable[[SuiteRequest, "ServiceContainer"], list[VerificationReport]]


class SuiteRouterError(RuntimeError):
    """Base error for router failures."""


class SuiteNotFoundError(SuiteRouterError, KeyError):
    """Raised when no runner is registered for the requested suite."""


class SuiteRouter:
    """Dispatch suite names to registered runners."""

    def __init__(self, handlers: Mapping[str, SuiteHandler] | None = None) -> None:
        self._handlers: MutableMapping[str, SuiteHandler] = dict(handlers or {})

    def register(self, suite: str, handler: SuiteHandler) -> None:
        """Register or replace a runner for ``suite``."""

        self._handlers[suite] = handler

    def unregister(self, suite: str) -> None:
        """Remove a runner if present."""

        self._handlers.pop(suite, None)

    def dispatch(self, request: SuiteRequest, services: "ServiceContainer") -> list[VerificationReport]:
        """Invoke the runner for ``request.suite`` with the provided services.

        A runner that raises a numerical error yields one failed ``<suite>:aborted``
        report, so the reports of other suites are still written.
        """

        try:
            handler = self._handlers[request.suite]
        except KeyError as exc:
            raise SuiteNotFoundError(f"No runner registered for suite {request.suite}") from exc
        with suite_id_context(request.suite):
            logger.info("[suite] %s started (seed=%d)", request.suite, request.seed)
            started = time.perf_counter()
            try:
                reports = handler(request, services)
            except NUMERICAL_ERRORS as exc:
                logger.error("[suite] %s aborted: %s", request.suite, exc)
                reports = [aborted_report(f"{request.suite}:aborted", exc)]
            elapsed_ms = (time.perf_counter() - started) * 1000.0
            failed = [report.id for report in reports if not report.passed]
            if failed:
                logger.warning("[suite] %s failed checks: %s", request.suite, failed)
            else:
                logger.info("[suite] %s passed %d checks", request.suite, len(reports))
        for report in reports:
            report.suite = request.suite
            if report.wall_time_ms is None:
                report.wall_time_ms = elapsed_ms
        return reports

    def dispatch_many(
        self,
        requests: Sequence[SuiteRequest],
        services: "ServiceContainer",
        *,
        threads: int = 1,
    ) -> list[list[VerificationReport]]:
        """Dispatch requests, optionally on a thread pool, keeping request order."""

        if threads <= 1 or len(requests) <= 1:
            return [self.dispatch(req, services) for req in requests]
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(lambda req: self.dispatch(req, services), requests))

    def handlers(self) -> Mapping[str, SuiteHandler]:
        """Return a shallow copy of the current suite registry."""

        return dict(self._handlers)


__all__ = [
    "SuiteRouter",
    "SuiteRouterError",
    "SuiteNotFoundError",
    "SuiteHandler",
    "SuiteRequest",
]
