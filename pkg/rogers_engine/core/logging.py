"""Structured JSON logs tagged with the run and the suite being verified.

Every record passes through :class:`RunContextFilter`, which copies the bound
``run_id``/``suite_id`` onto it. Handlers live on the root logger only: JSON
lines go to stderr (stdout carries CLI results) and to a rotating file.
"""

from __future__ import annotations

import logging
import sys
from contextlib import AbstractContextManager, contextmanager
from contextvars import ContextVar
from logging.handlers import RotatingFileHandler
from pathlib import Path
from threading import Event, Lock
from typing import Any, Iterator, Optional

from pythonjsonlogger.json import JsonFormatter

from rogers_engine.core.config import settings

_run_id: ContextVar[Optional[str]] = ContextVar("run_id", default=None)
_suite_id: ContextVar[Optional[str]] = ContextVar("suite_id", default=None)

# record attribute -> context variable copied onto it
_RECORD_CONTEXT: dict[str, ContextVar[Optional[str]]] = {
    "run_id": _run_id,
    "suite_id": _suite_id,
}

# logging.getLevelNamesMapping() is Python 3.11+; it returns a copy of _nameToLevel.
_level_names = getattr(logging, "getLevelNamesMapping", lambda: dict(logging._nameToLevel))()
LOG_LEVEL = _level_names.get(str(settings.QSK_LOG_LEVEL).upper(), logging.WARNING)

BASE_DIR = Path(__file__).resolve().parent.parent
ROOT_DIR = BASE_DIR.parent


def _candidate_log_dirs() -> Iterator[Path]:
    configured = getattr(settings, "QSK_LOG_DIR", None)
    if configured:
        yield Path(configured)
    yield ROOT_DIR / "logs"
    yield Path(getattr(settings, "QSK_DATA_DIR", Path("./data"))) / "logs"
    yield BASE_DIR / "logs"


def _resolve_logs_dir() -> Path:
    """First writable directory among QSK_LOG_DIR, checkout, data dir and package."""

    for candidate in _candidate_log_dirs():
        try:
            candidate.mkdir(parents=True, exist_ok=True)
        except PermissionError:
            continue
        return candidate
    raise PermissionError("Unable to create a writable logs directory")


LOGS_DIR = _resolve_logs_dir()
LOG_FILE_PATH = LOGS_DIR / "rogers_engine.log"
LOG_SCHEMA_VERSION = str(settings.QSK_LOG_SCHEMA_VERSION)
LOG_MAX_BYTES = 5 * 1024 * 1024
LOG_BACKUP_COUNT = 5

_LOG_FIELDS = ("asctime", "levelname", "name", "message", "run_id", "suite_id")
_RENAMED_FIELDS = {
    "asctime": "timestamp",
    "levelname": "level",
    "name": "logger",
    "run_id": "run",
    "suite_id": "suite",
}

_handler_lock = Lock()
_handlers_configured = Event()


class EngineJsonFormatter(JsonFormatter):
    """JSON formatter stamping every entry with the log schema version."""

    def __init__(self, *args: Any, schema_version: str, **kwargs: Any) -> None:
        super().__init__(*args, **kwargs)
        self._schema_version = schema_version

    def add_fields(
        self,
        log_record: dict[str, Any],
        record: logging.LogRecord,
        message_dict: dict[str, Any],
    ) -> None:
        super().add_fields(log_record, record, message_dict)
        log_record.setdefault("schema_version", self._schema_version)


class RunContextFilter(logging.Filter):  # pylint: disable=too-few-public-methods
    """Copy the bound run and suite ids onto each record, ``-`` when unbound."""

    def filter(self, record: logging.LogRecord) -> bool:
        for attribute, var in _RECORD_CONTEXT.items():
            setattr(record, attribute, var.get() or "-")
        return True


@contextmanager
def _bound(var: ContextVar[Optional[str]], value: Optional[str]) -> Iterator[None]:
    token = var.set(value)
    try:
        yield
    finally:
        var.reset(token)


def run_id_context(value: Optional[str]) -> AbstractContextManager[None]:
    """Bind a run id for the duration of a ``with`` block."""
    return _bound(_run_id, value)


def suite_id_context(value: Optional[str]) -> AbstractContextManager[None]:
    """Bind a suite name for the duration of a ``with`` block."""
    return _bound(_suite_id, value)


def _handler_target(handler: logging.Handler) -> tuple[type, object]:
    if isinstance(handler, RotatingFileHandler):
        return RotatingFileHandler, handler.baseFilename
    if isinstance(handler, logging.StreamHandler):
        return logging.StreamHandler, id(handler.stream)
    return type(handler), id(handler)


def _install_handler_once(logger: logging.Logger, handler: logging.Handler) -> None:
    target = _handler_target(handler)
    if any(_handler_target(existing) == target for existing in logger.handlers):
        handler.close()
        return
    logger.addHandler(handler)


def _build_formatter() -> EngineJsonFormatter:
    return EngineJsonFormatter(
        " ".join(f"%({name})s" for name in _LOG_FIELDS),
        rename_fields=_RENAMED_FIELDS,
        datefmt="%Y-%m-%d %H:%M:%S",
        json_ensure_ascii=False,
        schema_version=LOG_SCHEMA_VERSION,
    )


def _ensure_handlers() -> None:
    """Install the stderr and rotating-file handlers on the root logger once."""

    if _handlers_configured.is_set():
        return
    with _handler_lock:
        if _handlers_configured.is_set():
            return
        formatter = _build_formatter()
        context_filter = RunContextFilter()
        root_logger = logging.getLogger()
        root_logger.setLevel(LOG_LEVEL)
        handlers: list[logging.Handler] = [
            logging.StreamHandler(sys.stderr),
            RotatingFileHandler(
                LOG_FILE_PATH,
                maxBytes=LOG_MAX_BYTES,
                backupCount=LOG_BACKUP_COUNT,
                encoding="utf-8",
            ),
        ]
        for handler in handlers:
            handler.addFilter(context_filter)
            handler.setFormatter(formatter)
            _install_handler_once(root_logger, handler)
        _handlers_configured.set()


def get_logger(name: str) -> logging.Logger:
    """Return a logger that relies on the shared root handlers."""

    _ensure_handlers()
    logger = logging.getLogger(name)
    logger.setLevel(LOG_LEVEL)
    shared = {_handler_target(h) for h in logging.getLogger().handlers}
    for handler in [h for h in logger.handlers if _handler_target(h) in shared]:
        logger.removeHandler(handler)
    logger.propagate = True
    return logger


__all__ = [
    "EngineJsonFormatter",
    "RunContextFilter",
    "run_id_context",
    "suite_id_context",
    "get_logger",
    "LOG_FILE_PATH",
    "LOG_SCHEMA_VERSION",
]
