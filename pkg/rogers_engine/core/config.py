"""Engine configuration loaded via Pydantic settings."""

from __future__ import annotations

from pathlib import Path
from typing import Literal

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Typed configuration sourced from ``QSK_*`` environment variables."""

    model_config = SettingsConfigDict(env_file=".env", extra="ignore")

    QSK_THREADS: int = Field(default=1, ge=1)
    QSK_SEED: int = Field(default=42)
    QSK_LOG_LEVEL: str = Field(default="warning")
    QSK_LOG_DIR: Path | None = Field(default=None)
    QSK_LOG_SCHEMA_VERSION: str = Field(default="1.0.0")
    QSK_DATA_DIR: Path = Field(default=Path("./data"))

    # Truncation defaults shared by every series and product
    QSK_TERM_EPS: float = Field(default=1e-16, gt=0)
    QSK_ABS_FLOOR: float = Field(default=1e-300, ge=0)
    QSK_MAX_TERMS: int = Field(default=100_000, ge=1)
    QSK_PRODUCT_EPS: float = Field(default=1e-18, gt=0)

    # Definition sums whose cancellation ratio exceeds this fall back to recurrences
    QSK_SERIES_COND_LIMIT: float = Field(default=1e4, gt=1)

    # Quadrature
    QSK_QUAD_START_NODES: int = Field(default=32, ge=4)
    QSK_QUAD_MAX_NODES: int = Field(default=16_384, ge=8)
    QSK_QUAD_REL_TOL: float = Field(default=1e-10, gt=0)
    QSK_WILSON_NODES: int = Field(default=512, ge=16)

    QSK_REPORT_FORMAT: Literal["json", "csv"] = Field(default="json")
    QSK_REPORT_TIMINGS: bool = Field(default=False)


settings = Settings()
config = settings  # Alias used by the CLI layer


__all__ = ["Settings", "settings", "config"]
