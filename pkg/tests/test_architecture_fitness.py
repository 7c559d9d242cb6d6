"""Architectural fitness functions keeping the onion layers of the engine intact.

core holds domain types and configuration and stays free of numerical
libraries; services compute; adapters persist; apps parse the command line.
Dependencies only point inward.
"""

import re
from pathlib import Path

ROOT = Path(__file__).parent.parent
PACKAGE = ROOT / "rogers_engine"


def _imports(layer: str, pattern: str) -> list[str]:
    regex = re.compile(pattern, re.MULTILINE)
    return [
        str(py_file.relative_to(PACKAGE))
        for py_file in (PACKAGE / layer).rglob("*.py")
        if regex.search(py_file.read_text(encoding="utf-8"))
    ]


def test_no_python_modules_at_root():
    """Only packaging and test configuration files may live at the repository root."""
    allowed = {"setup.py", "conftest.py", "main.py", "__main__.py"}
    violations = [f.name for f in ROOT.glob("*.py") if f.name not in allowed]

    assert not violations, (
        f"Unexpected Python modules at root: {violations}\n"
        "Code belongs inside the rogers_engine package."
    )


def test_core_has_no_numerical_dependencies():
    """Core defines types and settings; numpy and scipy belong to services."""
    violations = _imports("core", r"^\s*(import|from) (numpy|scipy|mpmath)\b")

    assert not violations, f"Core imports numerical libraries: {violations}"


def test_core_does_not_import_outer_layers():
    """Core must not depend on services, adapters or apps."""
    violations = _imports("core", r"^\s*from rogers_engine\.(services|adapters|apps|bootstrap)\b")

    assert not violations, f"Core imports outer layers: {violations}"


def test_services_reach_adapters_only_through_ports():
    """Services must not import adapters, apps or the bootstrap module."""
    violations = _imports("services", r"^\s*from rogers_engine\.(adapters|apps|bootstrap)\b")

    assert not violations, (
        f"Services import outer layers: {violations}\n"
        "Use rogers_engine.core.ports.ReportSinkPort instead."
    )


def test_adapters_do_not_import_services():
    """Adapters serialize reports and never run computations."""
    violations = _imports("adapters", r"^\s*from rogers_engine\.(services|apps)\b")

    assert not violations, f"Adapters import services or apps: {violations}"
