"""Tests for the logging helpers with run and suite ids."""

from __future__ import annotations

import json
import logging
import sys
from logging.handlers import RotatingFileHandler
from pathlib import Path
from typing import Any, cast

from pythonjsonlogger.json import JsonFormatter

from rogers_engine.core.logging import (
    LOG_FILE_PATH,
    LOG_SCHEMA_VERSION,
    EngineJsonFormatter,
    RunContextFilter,
    get_logger,
    run_id_context,
    suite_id_context,
)


def _record(msg: str = "hello") -> logging.LogRecord:
    return logging.LogRecord(
        name="test",
        level=logging.INFO,
        pathname=__file__,
        lineno=10,
        msg=msg,
        args=None,
        exc_info=None,
    )


def _bound_ids() -> tuple[str, str]:
    record = _record()
    RunContextFilter().filter(record)
    record_any = cast(Any, record)
    return record_any.run_id, record_any.suite_id


def test_run_context_filter_attaches_context():
    """Filter should attach the current run and suite ids onto log records."""
    with run_id_context("run-1"), suite_id_context("rogers_gamma"):
        record = _record()
        assert RunContextFilter().filter(record) is True
        record_any = cast(Any, record)
        assert record_any.__dict__["run_id"] == "run-1"
        assert record_any.__dict__["suite_id"] == "rogers_gamma"


def test_filter_uses_placeholder_without_context():
    """Unbound ids are rendered as a dash."""
    assert _bound_ids() == ("-", "-")


def test_context_managers_restore_state():
    """Nested contexts restore the outer ids on exit."""
    with run_id_context("outer"), suite_id_context("qbinomial"):
        with run_id_context("inner"):
            assert _bound_ids() == ("inner", "qbinomial")
        assert _bound_ids() == ("outer", "qbinomial")
    assert _bound_ids() == ("-", "-")


def test_formatter_injects_schema_version_and_renames_fields():
    """Formatted records carry the schema version and renamed context keys."""
    formatter = EngineJsonFormatter(
        "%(levelname)s %(name)s %(message)s %(run_id)s",
        rename_fields={"levelname": "level", "name": "logger", "run_id": "run"},
        schema_version="9.9",
    )
    record = _record("[suite] started")
    with run_id_context("abc"):
        RunContextFilter().filter(record)
    payload = json.loads(formatter.format(record))
    assert payload["schema_version"] == "9.9"
    assert payload["level"] == "INFO"
    assert payload["run"] == "abc"
    assert payload["message"] == "[suite] started"


def test_get_logger_uses_shared_stderr_and_file_handlers():
    """Handlers live on the root logger and write JSON to stderr and the log file."""
    logger = get_logger("rogers_engine.tests.logging")
    root_handlers = logging.getLogger().handlers
    handlers = [
        handler
        for handler in root_handlers
        if (
            isinstance(handler, RotatingFileHandler)
            and Path(getattr(handler, "baseFilename", "")) == LOG_FILE_PATH
        )
        or (
            isinstance(handler, logging.StreamHandler)
            and getattr(handler, "stream", None) is sys.stderr
        )
    ]
    assert handlers, "expected shared stream/file handlers to be installed"
    assert not logger.handlers, "module logger should rely on shared handlers"
    assert all(
        any(isinstance(flt, RunContextFilter) for flt in handler.filters) for handler in handlers
    )
    assert all(isinstance(handler.formatter, JsonFormatter) for handler in handlers)
    assert not any(
        isinstance(h, logging.StreamHandler)
        and not isinstance(h, RotatingFileHandler)
        and getattr(h, "stream", None) is sys.stdout
        for h in root_handlers
    )
    assert LOG_SCHEMA_VERSION


def test_get_logger_does_not_duplicate_rotating_handler():
    """Calling get_logger repeatedly should not duplicate file handlers."""
    first = get_logger("rogers_engine.tests.logging.first")
    second = get_logger("rogers_engine.tests.logging.second")

    assert not first.handlers
    assert not second.handlers
    rotating = [h for h in logging.getLogger().handlers if isinstance(h, RotatingFileHandler)]
    assert len(rotating) == 1, "expected exactly one shared RotatingFileHandler"
