"""Identifiers for polynomial families, expansions, integrals and limit chains."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Literal, Mapping


class PolyFamily(str, Enum):
    """Orthogonal polynomial families the engine can evaluate."""

    ASKEY_WILSON = "askey_wilson"
    CQ_JACOBI = "cq_jacobi"
    CQ_ULTRASPHERICAL = "cq_ultraspherical"
    CQ_HERMITE = "cq_hermite"
    CQ_LEGENDRE = "cq_legendre"
    WILSON = "wilson"
    JACOBI = "jacobi"
    GEGENBAUER = "gegenbauer"
    CHEBYSHEV_T = "chebyshev_t"
    LEGENDRE = "legendre"
    LAGUERRE = "laguerre"


# Parameter names per family, in PolySpec order, and whether a base q is required.
FAMILY_PARAMS: dict[PolyFamily, tuple[str, ...]] = {
    PolyFamily.ASKEY_WILSON: ("a1", "a2", "a3", "a4"),
    PolyFamily.CQ_JACOBI: ("alpha", "gamma"),
    PolyFamily.CQ_ULTRASPHERICAL: ("beta",),
    PolyFamily.CQ_HERMITE: (),
    PolyFamily.CQ_LEGENDRE: (),
    PolyFamily.WILSON: ("a1", "a2", "a3", "a4"),
    PolyFamily.JACOBI: ("alpha", "beta"),
    PolyFamily.GEGENBAUER: ("mu",),
    PolyFamily.CHEBYSHEV_T: (),
    PolyFamily.LEGENDRE: (),
    PolyFamily.LAGUERRE: ("alpha",),
}

Q_FAMILIES: frozenset[PolyFamily] = frozenset(
    {
        PolyFamily.ASKEY_WILSON,
        PolyFamily.CQ_JACOBI,
        PolyFamily.CQ_ULTRASPHERICAL,
        PolyFamily.CQ_HERMITE,
        PolyFamily.CQ_LEGENDRE,
    }
)


class IdentityId(str, Enum):
    """Expansion identities of the form LHS = sum coefficient * polynomial."""

    AW_ROGERS = "aw_rogers"
    CQJACOBI_ROGERS = "cqjacobi_rogers"
    ROGERS_GAMMA = "rogers_gamma"
    CQHERMITE = "cqhermite"
    CHEBYSHEV_Q = "chebyshev_q"
    CQLEGENDRE = "cqlegendre"
    WILSON_LIMIT = "wilson_limit"
    GEGEN_GF_GENERAL = "gegen_gf_general"
    JACOBI_POW = "jacobi_pow"
    GEGEN_POW = "gegen_pow"
    CHEBY_POW = "cheby_pow"
    LEGENDRE_POW = "legendre_pow"
    HEINE = "heine"
    HEINE_SQRT = "heine_sqrt"
    JACOBI_1MX = "jacobi_1mx"
    GEGEN_1MX = "gegen_1mx"
    CHEBY_1MX = "cheby_1mx"
    LAGUERRE_1MX = "laguerre_1mx"
    ROGERS_GF = "rogers_gf"
    GEGEN_GF = "gegen_gf"
    CQHERMITE_GF = "cqhermite_gf"
    GEGEN_GAMMA = "gegen_gamma"


class CorollaryId(str, Enum):
    """Definite-integral corollaries checked by quadrature."""

    AW_INT = "aw"
    WILSON_INT = "wilson"
    CQJACOBI_INT = "cqjacobi"
    CQULTRA_INT = "cqultra"
    GEGEN_STIELTJES = "gegen_stieltjes"
    JACOBI_1MX_INT = "jacobi_1mx"
    GEGEN_1MX_INT = "gegen_1mx"
    CHEBY_1MX_INT = "cheby_1mx"
    LAGUERRE_1MX_INT = "laguerre_1mx"


class ChainId(str, Enum):
    """Limit chains from q-objects (or small parameters) to their classical targets."""

    POCHHAMMER = "pochhammer"
    CQJACOBI_JACOBI = "cqjacobi_jacobi"
    CQLEGENDRE_LEGENDRE = "cqlegendre_legendre"
    CQULTRA_GEGENBAUER = "cqultra_gegenbauer"
    CQULTRA_HERMITE = "cqultra_hermite"
    CQULTRA_CHEBYSHEV = "cqultra_chebyshev"
    ROGERS_GAMMA_GEGENBAUER = "rogers_gamma_gegenbauer"
    QUADRATIC_GAUSS = "quadratic_gauss"


class ExprKind(str, Enum):
    """Expression kinds accepted by ``rogers-engine eval``."""

    QPOCH = "qpoch"
    PHI = "phi"
    HYP = "hyp"
    POLY = "poly"
    WEIGHT = "weight"


Domain = Literal["interval", "wilson", "half_line"]


@dataclass(slots=True, frozen=True)
class IdentityDescriptor:
    """Parameter arity and target family of one expansion identity."""

    required: tuple[str, ...]
    family: PolyFamily
    family_params: tuple[str, ...] = ()
    q_required: bool = False
    t_dependent: bool = False
    domain: Domain = "interval"
    summary: str = ""


_AW = ("a1", "a2", "a3", "a4")

IDENTITY_CATALOG: dict[IdentityId, IdentityDescriptor] = {
    IdentityId.AW_ROGERS: IdentityDescriptor(
        ("beta", "t", *_AW), PolyFamily.ASKEY_WILSON, _AW, True, True,
        summary="Rogers generating function over Askey-Wilson polynomials",
    ),
    IdentityId.CQJACOBI_ROGERS: IdentityDescriptor(
        ("beta", "t", "alpha", "gamma"), PolyFamily.CQ_JACOBI, ("alpha", "gamma"), True, True,
        summary="Rogers generating function over continuous q-Jacobi polynomials",
    ),
    IdentityId.ROGERS_GAMMA: IdentityDescriptor(
        ("beta", "gamma", "t"), PolyFamily.CQ_ULTRASPHERICAL, ("gamma",), True, True,
        summary="Rogers generating function over C_n(x;gamma|q)",
    ),
    IdentityId.CQHERMITE: IdentityDescriptor(
        ("beta", "t"), PolyFamily.CQ_HERMITE, (), True, True,
        summary="Rogers generating function over continuous q-Hermite polynomials",
    ),
    IdentityId.CHEBYSHEV_Q: IdentityDescriptor(
        ("beta", "t"), PolyFamily.CHEBYSHEV_T, (), True, True,
        summary="Rogers generating function over Chebyshev polynomials",
    ),
    IdentityId.CQLEGENDRE: IdentityDescriptor(
        ("beta", "t"), PolyFamily.CQ_LEGENDRE, (), True, True,
        summary="Rogers generating function over continuous q-Legendre polynomials",
    ),
    IdentityId.WILSON_LIMIT: IdentityDescriptor(
        ("u", "t", *_AW), PolyFamily.WILSON, _AW, domain="wilson",
        summary="Gamma ratio expanded over Wilson polynomials",
    ),
    IdentityId.GEGEN_GF_GENERAL: IdentityDescriptor(
        ("beta", "t", "alpha", "gamma"), PolyFamily.JACOBI, ("alpha", "gamma"), t_dependent=True,
        summary="(1+t^2-2tx)^-beta over Jacobi polynomials",
    ),
    IdentityId.JACOBI_POW: IdentityDescriptor(
        ("alpha", "beta", "nu", "z"), PolyFamily.JACOBI, ("alpha", "beta"),
        summary="(z-x)^-nu over Jacobi polynomials",
    ),
    IdentityId.GEGEN_POW: IdentityDescriptor(
        ("mu", "nu", "z"), PolyFamily.GEGENBAUER, ("mu",),
        summary="(z-x)^-nu over Gegenbauer polynomials",
    ),
    IdentityId.CHEBY_POW: IdentityDescriptor(
        ("nu", "z"), PolyFamily.CHEBYSHEV_T,
        summary="(z-x)^-nu over Chebyshev polynomials",
    ),
    IdentityId.LEGENDRE_POW: IdentityDescriptor(
        ("nu", "z"), PolyFamily.LEGENDRE,
        summary="(z-x)^-nu over Legendre polynomials",
    ),
    IdentityId.HEINE: IdentityDescriptor(
        ("z",), PolyFamily.LEGENDRE,
        summary="Heine's formula for 1/(z-x)",
    ),
    IdentityId.HEINE_SQRT: IdentityDescriptor(
        ("z",), PolyFamily.CHEBYSHEV_T,
        summary="Heine's reciprocal square root identity",
    ),
    IdentityId.JACOBI_1MX: IdentityDescriptor(
        ("alpha", "beta", "nu"), PolyFamily.JACOBI, ("alpha", "beta"),
        summary="(1-x)^-nu over Jacobi polynomials",
    ),
    IdentityId.GEGEN_1MX: IdentityDescriptor(
        ("mu", "nu"), PolyFamily.GEGENBAUER, ("mu",),
        summary="(1-x)^-nu over Gegenbauer polynomials",
    ),
    IdentityId.CHEBY_1MX: IdentityDescriptor(
        ("nu",), PolyFamily.CHEBYSHEV_T,
        summary="(1-x)^-nu over Chebyshev polynomials",
    ),
    IdentityId.LAGUERRE_1MX: IdentityDescriptor(
        ("alpha", "nu"), PolyFamily.LAGUERRE, ("alpha",), domain="half_line",
        summary="x^-nu over Laguerre polynomials",
    ),
    IdentityId.ROGERS_GF: IdentityDescriptor(
        ("beta", "t"), PolyFamily.CQ_ULTRASPHERICAL, ("beta",), True, True,
        summary="Rogers generating function",
    ),
    IdentityId.GEGEN_GF: IdentityDescriptor(
        ("mu", "t"), PolyFamily.GEGENBAUER, ("mu",), t_dependent=True,
        summary="Gegenbauer generating function",
    ),
    IdentityId.CQHERMITE_GF: IdentityDescriptor(
        ("t",), PolyFamily.CQ_HERMITE, (), True, True,
        summary="Continuous q-Hermite generating function",
    ),
    IdentityId.GEGEN_GAMMA: IdentityDescriptor(
        ("lambda", "mu", "t"), PolyFamily.GEGENBAUER, ("mu",), t_dependent=True,
        summary="(1+t^2-2tx)^-lambda over C_n^mu, classical limit of the gamma expansion",
    ),
}


@dataclass(slots=True, frozen=True)
class CorollaryDescriptor:
    """Parameters and CLI defaults of one definite-integral corollary."""

    required: tuple[str, ...]
    family: PolyFamily
    q_required: bool = False
    defaults: Mapping[str, float] = field(default_factory=dict)


COROLLARY_CATALOG: dict[CorollaryId, CorollaryDescriptor] = {
    CorollaryId.AW_INT: CorollaryDescriptor(
        ("beta", "t", *_AW), PolyFamily.ASKEY_WILSON, True,
        {"a1": 0.1, "a2": 0.2, "a3": 0.3, "a4": 0.4, "beta": 0.5, "t": 0.2},
    ),
    CorollaryId.WILSON_INT: CorollaryDescriptor(
        ("u", "t", *_AW), PolyFamily.WILSON,
        defaults={"a1": 1.0, "a2": 1.5, "a3": 0.5, "a4": 2.0, "u": 0.5, "t": 1.5},
    ),
    CorollaryId.CQJACOBI_INT: CorollaryDescriptor(
        ("beta", "t", "alpha", "gamma"), PolyFamily.CQ_JACOBI, True,
        {"alpha": 0.5, "gamma": 0.2, "beta": 0.3, "t": 0.25},
    ),
    CorollaryId.CQULTRA_INT: CorollaryDescriptor(
        ("beta", "gamma", "t"), PolyFamily.CQ_ULTRASPHERICAL, True,
        {"beta": 0.3, "gamma": 0.5, "t": 0.25},
    ),
    CorollaryId.GEGEN_STIELTJES: CorollaryDescriptor(
        ("mu", "lambda", "t"), PolyFamily.GEGENBAUER,
        defaults={"mu": 0.7, "lambda": 0.4, "t": 0.25},
    ),
    CorollaryId.JACOBI_1MX_INT: CorollaryDescriptor(
        ("alpha", "beta", "nu"), PolyFamily.JACOBI,
        defaults={"alpha": 0.5, "beta": 0.5, "nu": 0.2},
    ),
    CorollaryId.GEGEN_1MX_INT: CorollaryDescriptor(
        ("mu", "nu"), PolyFamily.GEGENBAUER, defaults={"mu": 0.7, "nu": 0.2},
    ),
    CorollaryId.CHEBY_1MX_INT: CorollaryDescriptor(
        ("nu",), PolyFamily.CHEBYSHEV_T, defaults={"nu": 0.2},
    ),
    CorollaryId.LAGUERRE_1MX_INT: CorollaryDescriptor(
        ("alpha", "nu"), PolyFamily.LAGUERRE, defaults={"alpha": 0.5, "nu": 0.2},
    ),
}


STRUCTURAL_SUITES: tuple[str, ...] = (
    "qpoch_algebra",
    "qbinomial",
    "inequalities",
    "connection",
    "quadratic_transform",
    "wilson_termination",
    "heine_classical",
    "polynomial_checks",
    "limit_chains",
    "orthogonality",
    "integrals",
    "one_minus_x",
    "l2_interchange",
)


def known_suite_names() -> tuple[str, ...]:
    """Return every suite name accepted by configs and the CLI, ``all`` included."""

    return (*STRUCTURAL_SUITES, *(identity.value for identity in IdentityId), "all")


__all__ = [
    "PolyFamily",
    "FAMILY_PARAMS",
    "Q_FAMILIES",
    "IdentityId",
    "CorollaryId",
    "ChainId",
    "ExprKind",
    "IdentityDescriptor",
    "IDENTITY_CATALOG",
    "CorollaryDescriptor",
    "COROLLARY_CATALOG",
    "STRUCTURAL_SUITES",
    "known_suite_names",
]
