"""Unit tests for the suite router scaffolding."""

from __future__ import annotations

import threading

import pytest

from rogers_engine.core.exceptions import NonConvergent
from rogers_engine.core.models import VerificationReport
from rogers_engine.services import ServiceContainer, build_default_services
from rogers_engine.services.suite_router import (
    SuiteNotFoundError,
    SuiteRequest,
    SuiteRouter,
    SuiteRouterError,
)


def _report(report_id: str, residual: float = 0.0) -> VerificationReport:
    return VerificationReport(
        id=report_id, samples=1, max_rel_residual=residual, converged_fraction=1.0, tol_rel=1e-10
    )


def echo_runner(request: SuiteRequest, services: ServiceContainer) -> list[VerificationReport]:
    """Runner that reports the seed it was given."""

    _ = services
    return [_report(f"echo:{request.seed}")]


def test_dispatch_invokes_registered_runner():
    """Router calls the registered runner and stamps the suite name on its reports."""
    router = SuiteRouter({"echo": echo_runner})
    container = ServiceContainer(suite_router=router)

    reports = router.dispatch(SuiteRequest(suite="echo", seed=7), container)

    assert [r.id for r in reports] == ["echo:7"]
    assert reports[0].suite == "echo"
    assert reports[0].wall_time_ms is not None and reports[0].wall_time_ms >= 0.0


def test_dispatch_keeps_runner_timings():
    """A runner that measured its own wall time keeps it."""

    def timed(_request: SuiteRequest, _services: ServiceContainer) -> list[VerificationReport]:
        return [_report("timed").model_copy(update={"wall_time_ms": 12.5})]

    router = SuiteRouter({"timed": timed})
    reports = router.dispatch(SuiteRequest(suite="timed", seed=0), ServiceContainer(suite_router=router))
    assert reports[0].wall_time_ms == 12.5


def test_dispatch_turns_numerical_errors_into_a_failed_report():
    """A runner that raises yields one failed ``<suite>:aborted`` report instead of propagating."""

    def stalled(_request: SuiteRequest, _services: ServiceContainer) -> list[VerificationReport]:
        raise NonConvergent("quadrature did not settle")

    router = SuiteRouter({"x": stalled})
    reports = router.dispatch(SuiteRequest(suite="x", seed=0), ServiceContainer(suite_router=router))
    assert [r.id for r in reports] == ["x:aborted"]
    assert reports[0].suite == "x"
    assert reports[0].worst_point["error"] == "NonConvergent: quadrature did not settle"
    assert not reports[0].passed


def test_dispatch_unknown_suite_raises():
    """Router raises when no runner matches the requested suite."""
    router = SuiteRouter()
    container = ServiceContainer(suite_router=router)

    with pytest.raises(SuiteNotFoundError) as excinfo:
        router.dispatch(SuiteRequest(suite="missing", seed=0), container)
    assert isinstance(excinfo.value, SuiteRouterError)
    assert isinstance(excinfo.value, KeyError)


def test_dispatch_many_preserves_order():
    """Sequential dispatch preserves ordering of results."""
    router = SuiteRouter({"echo": echo_runner})
    container = ServiceContainer(suite_router=router)
    requests = [SuiteRequest(suite="echo", seed=seed) for seed in (3, 1, 2)]

    results = router.dispatch_many(requests, container)

    assert [batch[0].id for batch in results] == ["echo:3", "echo:1", "echo:2"]


def test_dispatch_many_threaded_preserves_order():
    """Pooled dispatch runs on worker threads and still returns results in request order."""
    seen: set[int] = set()
    lock = threading.Lock()

    def record(request: SuiteRequest, services: ServiceContainer) -> list[VerificationReport]:
        with lock:
            seen.add(threading.get_ident())
        return echo_runner(request, services)

    router = SuiteRouter({"echo": record})
    container = ServiceContainer(suite_router=router)
    requests = [SuiteRequest(suite="echo", seed=seed) for seed in range(6)]

    results = router.dispatch_many(requests, container, threads=3)

    assert [batch[0].id for batch in results] == [f"echo:{seed}" for seed in range(6)]
    assert threading.get_ident() not in seen


def test_register_and_unregister():
    """Runners can be replaced and removed; removing an unknown suite is a no-op."""
    router = SuiteRouter()
    router.register("echo", echo_runner)
    assert "echo" in router.handlers()

    router.unregister("echo")
    router.unregister("echo")
    assert "echo" not in router.handlers()


def test_handlers_returns_a_copy():
    """Mutating the returned registry does not touch the router."""
    router = SuiteRouter({"echo": echo_runner})
    snapshot = dict(router.handlers())
    snapshot.pop("echo")
    assert "echo" in router.handlers()


def test_build_default_services_registers_every_suite():
    """The default container routes every structural and identity suite."""
    container = build_default_services()
    assert container.suite_router is not None
    handlers = container.suite_router.handlers()
    assert "connection" in handlers
    assert "rogers_gf" in handlers
    assert container.policy.max_terms > 0
