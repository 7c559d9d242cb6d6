"""Core data transfer objects shared across layers."""

from __future__ import annotations

import cmath
from dataclasses import dataclass, field
from typing import Any, Literal, Mapping, Optional, Sequence

from pydantic import BaseModel, ConfigDict, Field, computed_field, field_validator

from rogers_engine.core.config import settings
from rogers_engine.core.exceptions import DomainViolation, ParameterDomain
from rogers_engine.core.identities import (
    FAMILY_PARAMS,
    IDENTITY_CATALOG,
    Q_FAMILIES,
    IdentityId,
    PolyFamily,
    known_suite_names,
)


@dataclass(slots=True, frozen=True)
class QBase:
    """Base ``q`` of every q-series, constrained to the open punctured unit disc."""

    q: complex

    def __post_init__(self) -> None:
        value = complex(self.q)
        if cmath.isnan(value) or not 0.0 < abs(value) < 1.0:
            raise ParameterDomain(f"q must satisfy 0 < |q| < 1, got {self.q!r}")
        object.__setattr__(self, "q", value)

    @classmethod
    def of(cls, q: "QBase | complex | float") -> "QBase":
        """Coerce a raw number into a validated base."""
        return q if isinstance(q, QBase) else cls(complex(q))


class TruncationPolicy(BaseModel):
    """Stopping thresholds for every infinite sum and product."""

    model_config = ConfigDict(frozen=True)

    term_eps: float = Field(default_factory=lambda: settings.QSK_TERM_EPS, gt=0)
    abs_floor: float = Field(default_factory=lambda: settings.QSK_ABS_FLOOR, ge=0)
    max_terms: int = Field(default_factory=lambda: settings.QSK_MAX_TERMS, ge=1)
    product_eps: float = Field(default_factory=lambda: settings.QSK_PRODUCT_EPS, gt=0)

    @classmethod
    def from_settings(cls) -> "TruncationPolicy":
        """Build the policy configured through ``QSK_*`` settings."""
        return cls()


@dataclass(slots=True, frozen=True)
class EvalResult:
    """Value of a truncated computation with its convergence metadata."""

    value: complex
    terms_used: int
    converged: bool
    tail_bound: float = 0.0


def _as_complex_tuple(values: Sequence[complex] | Sequence[float]) -> tuple[complex, ...]:
    return tuple(complex(v) for v in values)


@dataclass(slots=True, frozen=True)
class PhiSpec:
    """Parameters of a basic hypergeometric series r phi s."""

    num: tuple[complex, ...]
    den: tuple[complex, ...]
    q: QBase
    z: complex

    def __post_init__(self) -> None:
        object.__setattr__(self, "num", _as_complex_tuple(self.num))
        object.__setattr__(self, "den", _as_complex_tuple(self.den))
        object.__setattr__(self, "q", QBase.of(self.q))
        object.__setattr__(self, "z", complex(self.z))


@dataclass(slots=True, frozen=True)
class HypSpec:
    """Parameters of a generalized hypergeometric series pFq."""

    num: tuple[complex, ...]
    den: tuple[complex, ...]
    z: complex

    def __post_init__(self) -> None:
        object.__setattr__(self, "num", _as_complex_tuple(self.num))
        object.__setattr__(self, "den", _as_complex_tuple(self.den))
        object.__setattr__(self, "z", complex(self.z))


def _validate_family(
    family: PolyFamily, params: tuple[complex, ...], q: Optional[QBase]
) -> None:
    expected = FAMILY_PARAMS[family]
    if len(params) != len(expected):
        raise ParameterDomain(
            f"{family.value} expects {len(expected)} parameters {expected}, got {len(params)}"
        )
    if (family in Q_FAMILIES) != (q is not None):
        state = "requires" if family in Q_FAMILIES else "does not take"
        raise ParameterDomain(f"{family.value} {state} a base q")


@dataclass(slots=True, frozen=True)
class PolySpec:
    """One instance of an orthogonal polynomial family."""

    family: PolyFamily
    params: tuple[complex, ...] = ()
    q: Optional[QBase] = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "family", PolyFamily(self.family))
        object.__setattr__(self, "params", _as_complex_tuple(self.params))
        if self.q is not None:
            object.__setattr__(self, "q", QBase.of(self.q))
        _validate_family(self.family, self.params, self.q)

    def param(self, name: str) -> complex:
        """Return a parameter by its family-specific name."""
        return self.params[FAMILY_PARAMS[self.family].index(name)]

    @property
    def qv(self) -> complex:
        """The base as a plain complex number; only valid for q-families."""
        if self.q is None:
            raise ParameterDomain(f"{self.family.value} has no base q")
        return self.q.q


@dataclass(slots=True, frozen=True)
class WeightSpec:
    """Orthogonality weight of a family instance."""

    family: PolyFamily
    params: tuple[complex, ...] = ()
    q: Optional[QBase] = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "family", PolyFamily(self.family))
        object.__setattr__(self, "params", _as_complex_tuple(self.params))
        if self.q is not None:
            object.__setattr__(self, "q", QBase.of(self.q))
        _validate_family(self.family, self.params, self.q)

    def poly_spec(self) -> PolySpec:
        """The polynomial family orthogonal with respect to this weight."""
        return PolySpec(self.family, self.params, self.q)


@dataclass(slots=True, frozen=True)
class IntegralResult:
    """Quadrature value with the node count and doubling error estimate.

    ``magnitude`` is the same rule applied to the modulus of the integrand.
    """

    value: complex
    nodes_used: int
    est_error: float
    magnitude: float = 0.0


@dataclass(slots=True)
class CoeffRequest:
    """Request for the n-th expansion coefficient of an identity."""

    id: IdentityId
    n: int
    params: Mapping[str, complex]
    q: Optional[QBase] = None
    pol: TruncationPolicy = field(default_factory=TruncationPolicy.from_settings)
    vwp_rewrite: bool = False

    def __post_init__(self) -> None:
        self.id = IdentityId(self.id)
        descriptor = IDENTITY_CATALOG[self.id]
        if self.n < 0:
            raise DomainViolation(f"coefficient index must be nonnegative, got {self.n}")
        missing = [name for name in descriptor.required if name not in self.params]
        if missing:
            raise DomainViolation(f"{self.id.value} requires parameters {missing}")
        if descriptor.q_required:
            if self.q is None:
                raise DomainViolation(f"{self.id.value} requires a base q")
            self.q = QBase.of(self.q)
        if descriptor.t_dependent and not abs(complex(self.params["t"])) < 1.0:
            raise DomainViolation(f"{self.id.value} requires |t| < 1")

    def p(self, name: str) -> complex:
        """Return a named parameter as a complex number."""
        return complex(self.params[name])


class GridSpec(BaseModel):
    """Evaluation points, parameter samples and truncation for one identity check."""

    x_points: list[float] = Field(min_length=1)
    param_samples: list[dict[str, float]] = Field(min_length=1)
    n_terms: int = Field(ge=1)
    tol_rel: float = Field(gt=0)


class VerificationReport(BaseModel):
    """Aggregated residuals of one identity or property check."""

    suite: str = ""
    id: str
    samples: int = Field(ge=0)
    max_rel_residual: float
    worst_point: dict[str, Any] = Field(default_factory=dict)
    n_terms_used: int = 0
    converged_fraction: float = Field(ge=0.0, le=1.0)
    tol_rel: float = Field(gt=0)
    params: dict[str, Any] = Field(default_factory=dict)
    grid: dict[str, Any] = Field(default_factory=dict)
    wall_time_ms: Optional[float] = None

    @computed_field  # type: ignore[prop-decorator]
    @property
    def passed(self) -> bool:
        """Residual within tolerance and every sample converged."""
        return self.max_rel_residual <= self.tol_rel and self.converged_fraction == 1.0


class GridOverride(BaseModel):
    """Partial grid settings applied on top of a suite's defaults."""

    model_config = ConfigDict(extra="forbid")

    n_terms: Optional[int] = Field(default=None, ge=1)
    tol_rel: Optional[float] = Field(default=None, gt=0)
    x_points: Optional[list[float]] = Field(default=None, min_length=1)


class SuiteConfig(BaseModel):
    """Validated configuration of one ``verify`` run."""

    model_config = ConfigDict(extra="forbid")

    suites: list[str] = Field(default_factory=lambda: ["all"], min_length=1)
    grids: dict[str, GridOverride] = Field(default_factory=dict)
    truncation: TruncationPolicy = Field(default_factory=TruncationPolicy.from_settings)
    output_path: Optional[str] = None
    format: Literal["json", "csv"] = Field(default_factory=lambda: settings.QSK_REPORT_FORMAT)
    seed: int = Field(default_factory=lambda: settings.QSK_SEED)
    threads: int = Field(default_factory=lambda: settings.QSK_THREADS, ge=1)
    timings: bool = Field(default_factory=lambda: settings.QSK_REPORT_TIMINGS)

    @field_validator("suites")
    @classmethod
    def _known_suites(cls, value: list[str]) -> list[str]:
        known = set(known_suite_names())
        unknown = [name for name in value if name not in known]
        if unknown:
            raise ValueError(f"unknown suites: {unknown}")
        return value

    @field_validator("grids")
    @classmethod
    def _known_grid_keys(cls, value: dict[str, GridOverride]) -> dict[str, GridOverride]:
        known = set(known_suite_names())
        unknown = [name for name in value if name not in known]
        if unknown:
            raise ValueError(f"grid overrides name unknown suites: {unknown}")
        return value


__all__ = [
    "QBase",
    "TruncationPolicy",
    "EvalResult",
    "PhiSpec",
    "HypSpec",
    "PolySpec",
    "WeightSpec",
    "IntegralResult",
    "CoeffRequest",
    "GridSpec",
    "VerificationReport",
    "GridOverride",
    "SuiteConfig",
]
