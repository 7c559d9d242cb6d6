"""Tests for log directory resolution."""

from __future__ import annotations

import pathlib
from types import SimpleNamespace

import pytest

from rogers_engine.core import logging as core_logging

# pylint: disable=missing-function-docstring,protected-access


@pytest.fixture
def layout(tmp_path: pathlib.Path, monkeypatch: pytest.MonkeyPatch):
    """Point the resolver at a throwaway checkout under ``tmp_path``."""

    root_dir = tmp_path / "checkout"
    monkeypatch.setattr(core_logging, "ROOT_DIR", root_dir)
    monkeypatch.setattr(core_logging, "BASE_DIR", root_dir / "rogers_engine")

    def configure(log_dir: pathlib.Path | None) -> SimpleNamespace:
        settings = SimpleNamespace(
            QSK_LOG_LEVEL="info",
            QSK_LOG_DIR=log_dir,
            QSK_DATA_DIR=tmp_path / "data",
        )
        monkeypatch.setattr(core_logging, "settings", settings)
        return settings

    return SimpleNamespace(root=root_dir, data=tmp_path / "data", configure=configure)


def _deny(monkeypatch: pytest.MonkeyPatch, *blocked: pathlib.Path) -> None:
    original_mkdir = pathlib.Path.mkdir

    def guarded_mkdir(path_obj: pathlib.Path, *args, **kwargs):
        if path_obj in blocked:
            raise PermissionError("unwritable")
        return original_mkdir(path_obj, *args, **kwargs)

    monkeypatch.setattr(pathlib.Path, "mkdir", guarded_mkdir)


def test_override_wins(layout, tmp_path: pathlib.Path) -> None:
    override = tmp_path / "custom-logs"
    layout.configure(override)

    resolved = core_logging._resolve_logs_dir()
    assert resolved == override
    assert resolved.is_dir()


def test_checkout_logs_without_override(layout) -> None:
    layout.configure(None)

    assert core_logging._resolve_logs_dir() == layout.root / "logs"


def test_unwritable_override_is_skipped(layout, tmp_path, monkeypatch) -> None:
    override = tmp_path / "override"
    layout.configure(override)
    _deny(monkeypatch, override)

    assert core_logging._resolve_logs_dir() == layout.root / "logs"


def test_data_dir_used_when_checkout_is_read_only(layout, monkeypatch) -> None:
    layout.configure(None)
    _deny(monkeypatch, layout.root / "logs")

    resolved = core_logging._resolve_logs_dir()
    assert resolved == layout.data / "logs"
    assert resolved.is_dir()


def test_no_writable_candidate_raises(layout, monkeypatch) -> None:
    layout.configure(None)
    _deny(
        monkeypatch,
        layout.root / "logs",
        layout.data / "logs",
        layout.root / "rogers_engine" / "logs",
    )

    with pytest.raises(PermissionError):
        core_logging._resolve_logs_dir()
