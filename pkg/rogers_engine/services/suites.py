"""Default suite runners.

Each runner takes a :class:`SuiteRequest` and the active service container and
returns its reports. Every random draw comes from a generator seeded by the
suite name and the request seed, so a suite run is reproducible regardless of
how suites are scheduled.
"""

from __future__ import annotations

import itertools
import math
import zlib
from dataclasses import dataclass
from typing import TYPE_CHECKING, Mapping, Sequence

import numpy as np

from rogers_engine.core.identities import (
    COROLLARY_CATALOG,
    ChainId,
    CorollaryId,
    IdentityId,
    PolyFamily,
)
from rogers_engine.core.logging import get_logger
from rogers_engine.core.models import (
    GridOverride,
    GridSpec,
    PhiSpec,
    TruncationPolicy,
    VerificationReport,
    WeightSpec,
)
from rogers_engine.services.expansions import coefficients
from rogers_engine.services.hyperseries import phi, qbinomial_product, vwp_phi_spec
from rogers_engine.services.polyfamilies import (
    family_spec,
    gamma_ratio_asymptote,
    poly_sequence,
    poly_values,
)
from rogers_engine.services.qcore import (
    check_inequalities,
    qpoch_finite,
    qpoch_finite_many,
    qpoch_general,
)
from rogers_engine.services.quadrature import (
    fit_growth_exponent,
    norm_growth_bound,
    verify_integral_corollary,
    verify_orthogonality_block,
)
from rogers_engine.services.residuals import NUMERICAL_ERRORS, ResidualTracker, relative_error
from rogers_engine.services.suite_router import SuiteHandler, SuiteRequest, SuiteRouter
from rogers_engine.services.verifier import (
    quadratic_transform_sides,
    verify_coefficient_growth,
    verify_connection,
    verify_expansion,
    verify_heine_classical,
    verify_l2_interchange,
    verify_limit_chain,
    verify_projection,
    verify_quadratic_gauss,
    verify_quadratic_transform,
)

if TYPE_CHECKING:  # pragma: no cover - import for static analysis only
    from . import ServiceContainer

logger = get_logger(__name__)

CHEBYSHEV_GRID: tuple[float, ...] = tuple(math.cos(math.pi * j / 10) for j in range(11))
WILSON_GRID: tuple[float, ...] = (0.5, 1.0, 2.0)
WILSON_PARAMS: dict[str, float] = {"a1": 1.0, "a2": 1.5, "a3": 0.5, "a4": 2.0}

_T_VALUES = (0.1, 0.25, 0.4)
_Q_VALUES = (0.3, 0.5)
_SIGNED = (-0.3, 0.3, 0.6)
_Q_ALGEBRA = (0.3, 0.5, 0.8)
_POLE_MARGIN = 0.05


def _rng(request: SuiteRequest) -> np.random.Generator:
    return np.random.default_rng((zlib.crc32(request.suite.encode()) + request.seed) % 2**64)


def _lattice(**axes: Sequence[float]) -> tuple[dict[str, float], ...]:
    names = list(axes)
    return tuple(dict(zip(names, values)) for values in itertools.product(*axes.values()))


def _disc(rng: np.random.Generator, radius: float) -> complex:
    """Uniform draw from the closed disc of ``radius``."""
    r = radius * math.sqrt(float(rng.uniform()))
    angle = float(rng.uniform(0.0, 2.0 * math.pi))
    return complex(r * math.cos(angle), r * math.sin(angle))


def merge_reports(report_id: str, reports: Sequence[VerificationReport]) -> VerificationReport:
    """Fold several reports of one check into a single worst-case report."""

    if not reports:
        raise ValueError(f"nothing to merge for {report_id}")
    worst = max(reports, key=lambda r: r.max_rel_residual)
    samples = sum(r.samples for r in reports)
    converged = sum(r.converged_fraction * r.samples for r in reports)
    return VerificationReport(
        id=report_id,
        samples=samples,
        max_rel_residual=worst.max_rel_residual,
        worst_point={**worst.params, **worst.worst_point},
        n_terms_used=max(r.n_terms_used for r in reports),
        converged_fraction=converged / samples if samples else 1.0,
        tol_rel=worst.tol_rel,
        grid={"cases": len(reports)},
    )


# ---------------------------------------------------------------------------
# q-Pochhammer algebra and the q-binomial theorem
# ---------------------------------------------------------------------------

_QPOCH_SAMPLES = 500
_QBINOMIAL_SAMPLES = 100


def _qpoch_algebra(request: SuiteRequest, services: "ServiceContainer") -> list[VerificationReport]:
    rng = _rng(request)
    pol = services.policy
    names = ("additivity", "square_base", "shift", "general_exponent")
    trackers = {name: ResidualTracker(f"qpoch:{name}", 1e-12) for name in names}
    for _ in range(_QPOCH_SAMPLES):
        q = float(rng.choice(_Q_ALGEBRA))
        a = _disc(rng, 0.9)
        n, k = (int(v) for v in rng.integers(0, 13, size=2))
        point = {"a": a, "q": q, "n": n, "k": k}

        split = qpoch_finite(a, q, k) * qpoch_finite(a * q**k, q, n)
        trackers["additivity"].add(relative_error(qpoch_finite(a, q, n + k), split), point)

        squared = qpoch_finite(a * a, q * q, n)
        trackers["square_base"].add(relative_error(squared, qpoch_finite(a, q, n) * qpoch_finite(-a, q, n)), point)

        r, m = float(rng.uniform(0.05, 0.95)), min(n, 10)
        root, root_q = math.sqrt(r), math.sqrt(r * q)
        doubled = qpoch_finite(r * q**m, q, m) * qpoch_finite(r, q, m)
        roots = qpoch_finite_many([root, -root, root_q, -root_q], q, m)
        trackers["shift"].add(relative_error(doubled, roots), {"a": r, "q": q, "n": m})

        beta = complex(float(rng.uniform(0.0, 2.0)), float(rng.uniform(-1.0, 1.0)))
        m = min(n, 8)
        whole = qpoch_general(a, q, m + beta, pol)
        tail = qpoch_general(a * q**m, q, beta, pol)
        trackers["general_exponent"].add(
            relative_error(whole.value, qpoch_finite(a, q, m) * tail.value),
            {"a": a, "q": q, "n": m, "beta": beta},
            converged=whole.converged and tail.converged,
        )
    grid = {"samples": _QPOCH_SAMPLES, "q": list(_Q_ALGEBRA)}
    return [tracker.report(grid=grid) for tracker in trackers.values()]


def _qbinomial(request: SuiteRequest, services: "ServiceContainer") -> list[VerificationReport]:
    rng = _rng(request)
    tracker = ResidualTracker("qbinomial", 1e-12)
    for _ in range(_QBINOMIAL_SAMPLES):
        q = float(rng.choice(_Q_ALGEBRA))
        a, z = _disc(rng, 0.9), _disc(rng, 0.8)
        series = phi(PhiSpec((a,), (), q, z), services.policy)
        product = qbinomial_product(a, q, z, services.policy)
        tracker.add(relative_error(product, series.value), {"a": a, "z": z, "q": q}, converged=series.converged)
        tracker.n_terms_used = max(tracker.n_terms_used, series.terms_used)
    return [tracker.report(grid={"samples": _QBINOMIAL_SAMPLES, "q": list(_Q_ALGEBRA)})]


# ---------------------------------------------------------------------------
# Inequalities
# ---------------------------------------------------------------------------

_INEQUALITY_Q = (0.3, 0.7, 0.95)
_INEQUALITY_U = (0.1, 0.5, 1.0, 2.5, 5.0)
_INEQUALITY_V = (0.0, 0.5, 1.0, 2.5, 5.0)
_INDEX_MAX = 20


def _inequalities(request: SuiteRequest, _services: "ServiceContainer") -> list[VerificationReport]:
    rng = _rng(request)
    names = ("factorial_lower", "ratio_upper", "shifted_ratio_upper")
    counts = dict.fromkeys(names, 0)
    excess = dict.fromkeys(names, 0.0)
    worst: dict[str, dict[str, object]] = {name: {} for name in names}
    for q in _INEQUALITY_Q:
        u_values = (*_INEQUALITY_U, *(float(u) for u in rng.uniform(0.05, 5.0, size=2)))
        v_values = (*_INEQUALITY_V, *(float(v) for v in rng.uniform(0.0, 5.0, size=2)))
        counts["factorial_lower"] += len(u_values) * _INDEX_MAX
        counts["ratio_upper"] += len(u_values) * (_INDEX_MAX + 1)
        pairs = sum(1 for u in u_values for v in v_values if v >= u)
        counts["shifted_ratio_upper"] += pairs * (_INDEX_MAX + 1) * _INDEX_MAX
        for violation in check_inequalities(
            q, index_max=_INDEX_MAX, u_values=u_values, v_values=v_values
        ):
            amount = abs(violation.lhs - violation.rhs) / violation.rhs
            if amount > excess[violation.name]:
                excess[violation.name] = amount
                worst[violation.name] = {**violation.point, "q": q, "lhs": violation.lhs, "rhs": violation.rhs}
    return [
        VerificationReport(
            id=f"inequality:{name}",
            samples=counts[name],
            max_rel_residual=excess[name],
            worst_point=worst[name],
            converged_fraction=1.0,
            tol_rel=1e-12,
            grid={"index_max": _INDEX_MAX, "q": list(_INEQUALITY_Q)},
        )
        for name in names
    ]


# ---------------------------------------------------------------------------
# Connection relation and quadratic transformations
# ---------------------------------------------------------------------------

_CONNECTION_PARAMS = (0.25, 0.55, -0.4)
_CONNECTION_Q = (0.3, 0.5, 0.8)
_CONNECTION_POINTS = tuple(math.cos(math.pi * (2 * j + 1) / 22) for j in range(11))


def _connection(_request: SuiteRequest, _services: "ServiceContainer") -> list[VerificationReport]:
    reports = [
        verify_connection(10, beta, gamma, q, _CONNECTION_POINTS)
        for q in _CONNECTION_Q
        for beta in _CONNECTION_PARAMS
        for gamma in _CONNECTION_PARAMS
    ]
    return [merge_reports("connection", reports)]


_QUADRATIC_SAMPLES = 200
_GAUSS_SAMPLES = 20


def _near_pole(a: float, b: float, t: float, q: float) -> bool:
    """Whether some denominator factor of either side comes within the margin of zero."""

    powers = q ** np.arange(200)
    for tt in (t, -t):
        root = math.sqrt(q) * a / b
        spec = vwp_phi_spec(a * a / b * tt, [root, -root, -a / b, b * tt, a], q, q * tt)
        dens = [q * a / b, q * a * a / b * tt, q * a * tt, q * tt * tt, *spec.den]
        for d in dens:
            if np.min(np.abs(1.0 - d * powers)) < _POLE_MARGIN:
                return True
    return False


def _quadratic_transform(request: SuiteRequest, services: "ServiceContainer") -> list[VerificationReport]:
    rng = _rng(request)
    samples: list[tuple[float, float, float, float]] = []
    while len(samples) < _QUADRATIC_SAMPLES:
        a, b = (float(v) for v in rng.uniform(0.05, 0.7, size=2))
        t = float(rng.uniform(0.05, 0.4))
        q = float(rng.choice(_Q_ALGEBRA))
        if not _near_pole(a, b, t, q):
            samples.append((a, b, t, q))
    transform = [verify_quadratic_transform(a, b, t, q, services.policy) for a, b, t, q in samples]

    reduction = ResidualTracker("quadratic_transform:a0", 1e-12)
    for _, b, t, q in samples[:_GAUSS_SAMPLES]:
        closed = qbinomial_product(b, q, q * t * t, services.policy)
        point = {"b": b, "t": t, "q": q}
        try:
            left, right = quadratic_transform_sides(0.0, b, t, q, services.policy)
        except NUMERICAL_ERRORS as exc:
            reduction.record_error(point, exc)
            continue
        reduction.add(max(relative_error(closed, left), relative_error(closed, right)), point)

    gauss = [verify_quadratic_gauss(a, b, t, tol_rel=1e-11) for a, b, t, _ in samples[:_GAUSS_SAMPLES]]
    return [
        merge_reports("quadratic_transform", transform),
        reduction.report(),
        merge_reports("quadratic_gauss", gauss),
    ]


# ---------------------------------------------------------------------------
# Wilson termination and Heine's classical formulas
# ---------------------------------------------------------------------------

_WILSON_TERMS = 8


def _wilson_termination(request: SuiteRequest, services: "ServiceContainer") -> list[VerificationReport]:
    rng = _rng(request)
    # dyadic u keeps t - u an exact integer
    u_values = (0.5, 1.0, round(float(rng.uniform(0.3, 1.5)) * 64) / 64)
    samples = [{**WILSON_PARAMS, "u": u, "t": u + m} for u in u_values for m in range(4)]
    grid = GridSpec(
        x_points=list(WILSON_GRID), param_samples=samples, n_terms=_WILSON_TERMS, tol_rel=1e-8
    )
    expansion = verify_expansion(IdentityId.WILSON_LIMIT, grid, pol=services.policy)

    vanishing = ResidualTracker("wilson_termination:vanishing", math.ulp(0.0))
    for sample in samples:
        m = int(sample["t"] - sample["u"])
        coeffs = coefficients(IdentityId.WILSON_LIMIT, sample, _WILSON_TERMS, None, services.policy)
        for n in range(m + 1, _WILSON_TERMS):
            vanishing.add(abs(coeffs[n].value), {**sample, "n": n})
    return [
        expansion.model_copy(update={"id": "wilson_termination"}),
        vanishing.report(grid={"n_terms": _WILSON_TERMS}),
    ]


_HEINE_Z = (1.25, 2.0, 3.0)
_HEINE_TERMS = 80


def _heine_classical(request: SuiteRequest, _services: "ServiceContainer") -> list[VerificationReport]:
    rng = _rng(request)
    zs = (*_HEINE_Z, round(float(rng.uniform(1.1, 3.0)), 6))
    plain = [verify_heine_classical(z, _HEINE_TERMS) for z in zs]
    root = [verify_heine_classical(z, _HEINE_TERMS, reciprocal_sqrt=True) for z in zs]
    return [merge_reports("heine_classical:heine", plain), merge_reports("heine_classical:heine_sqrt", root)]


# ---------------------------------------------------------------------------
# Polynomial families
# ---------------------------------------------------------------------------

_RECURRENCE_CASES: tuple[tuple[PolyFamily, tuple[float, ...], float | None, tuple[float, ...]], ...] = (
    (PolyFamily.ASKEY_WILSON, (0.1, 0.2, 0.3, 0.4), 0.5, CHEBYSHEV_GRID),
    (PolyFamily.CQ_JACOBI, (0.2, 0.5), 0.5, CHEBYSHEV_GRID),
    (PolyFamily.CQ_ULTRASPHERICAL, (0.4,), 0.5, CHEBYSHEV_GRID),
    (PolyFamily.CQ_HERMITE, (), 0.5, CHEBYSHEV_GRID),
    (PolyFamily.CQ_LEGENDRE, (), 0.5, CHEBYSHEV_GRID),
    (PolyFamily.WILSON, (1.0, 1.5, 0.5, 2.0), None, WILSON_GRID),
    (PolyFamily.JACOBI, (0.3, 0.7), None, CHEBYSHEV_GRID),
    (PolyFamily.GEGENBAUER, (0.7,), None, CHEBYSHEV_GRID),
    (PolyFamily.CHEBYSHEV_T, (), None, CHEBYSHEV_GRID),
    (PolyFamily.LEGENDRE, (), None, CHEBYSHEV_GRID),
    (PolyFamily.LAGUERRE, (0.5,), None, tuple(float(x) for x in np.linspace(0.0, 10.0, 11))),
)
_RECURRENCE_DEGREE = 12


def _series_against_recurrence() -> VerificationReport:
    tracker = ResidualTracker("poly:series_recurrence", 1e-10, n_terms_used=_RECURRENCE_DEGREE)
    for family, params, q, points in _RECURRENCE_CASES:
        spec = family_spec(family, params, q)
        xs = np.asarray(points)
        recurrence = poly_sequence(spec, _RECURRENCE_DEGREE, xs)
        for n in range(1, _RECURRENCE_DEGREE + 1):
            direct = poly_values(spec, n, xs)
            scale = float(np.max(np.abs(recurrence[n])))
            for x, left, right in zip(xs, direct, recurrence[n]):
                point = {"family": family.value, "n": n, "x": float(x)}
                tracker.add(relative_error(complex(right), complex(left), scale), point)
    return tracker.report()


def _ultraspherical_specialisations(beta: float, q: float, n_max: int = 12) -> list[VerificationReport]:
    xs = np.asarray(CHEBYSHEV_GRID)
    ultra = poly_sequence(family_spec(PolyFamily.CQ_ULTRASPHERICAL, (beta,), q), n_max, xs)
    root, root_q = math.sqrt(beta), math.sqrt(q * beta)
    aw = poly_sequence(family_spec(PolyFamily.ASKEY_WILSON, (root, -root, root_q, -root_q), q), n_max, xs)
    jacobi = poly_sequence(family_spec(PolyFamily.CQ_JACOBI, (beta, beta), q), n_max, xs)
    half = math.sqrt(q) * beta
    via_aw = ResidualTracker("poly:cqultra_askey_wilson", 1e-11, n_terms_used=n_max)
    via_jacobi = ResidualTracker("poly:cqultra_cqjacobi_diagonal", 1e-11, n_terms_used=n_max)
    for n in range(n_max + 1):
        squared = qpoch_finite(beta * beta, q, n)
        aw_scale = squared / qpoch_finite_many([q, -beta, half, -half], q, n)
        jacobi_scale = beta ** (-n / 2) * squared / qpoch_finite(half, q, n)
        scale = float(np.max(np.abs(ultra[n])))
        for x, c, p, j in zip(xs, ultra[n], aw[n], jacobi[n]):
            point = {"beta": beta, "q": q, "n": n, "x": float(x)}
            via_aw.add(relative_error(complex(c), aw_scale * p, scale), point)
            via_jacobi.add(relative_error(complex(c), jacobi_scale * j, scale), point)
    return [via_aw.report(), via_jacobi.report()]


def _gegenbauer_jacobi(mu: float = 0.7, n_max: int = 20) -> VerificationReport:
    xs = np.asarray(CHEBYSHEV_GRID)
    gegen = poly_sequence(family_spec(PolyFamily.GEGENBAUER, (mu,)), n_max, xs)
    jacobi = poly_sequence(family_spec(PolyFamily.JACOBI, (mu - 0.5, mu - 0.5)), n_max, xs)
    tracker = ResidualTracker("poly:gegenbauer_jacobi", 1e-12, n_terms_used=n_max)
    scale = 1.0
    for n in range(n_max + 1):
        if n:
            scale *= (2.0 * mu + n - 1) / (mu + 0.5 + n - 1)
        size = float(np.max(np.abs(gegen[n])))
        for x, c, p in zip(xs, gegen[n], jacobi[n]):
            tracker.add(relative_error(complex(c), scale * p, size), {"mu": mu, "n": n, "x": float(x)})
    return tracker.report()


def _chebyshev_cosine(n_max: int = 20) -> VerificationReport:
    thetas = np.pi * np.arange(11) / 10
    values = poly_sequence(family_spec(PolyFamily.CHEBYSHEV_T), n_max, np.cos(thetas))
    tracker = ResidualTracker("poly:chebyshev_cosine", 1e-12, n_terms_used=n_max)
    for n in range(n_max + 1):
        scale = float(np.max(np.abs(values[n])))
        for theta, value in zip(thetas, values[n]):
            tracker.add(relative_error(math.cos(n * theta), complex(value), scale), {"n": n, "theta": float(theta)})
    return tracker.report()


_ASYMPTOTE_TAUS = (1e2, 1e3, 1e4)


def _gamma_asymptote(a: float = 1.5, b: float = 0.25) -> VerificationReport:
    """Relative deviation from the imaginary-axis asymptote must fall like ``1/tau``."""

    worst, worst_point = 0.0, {}
    for sign in (1, -1):
        devs = []
        for tau in _ASYMPTOTE_TAUS:
            ratio, asymptote = gamma_ratio_asymptote(a, b, tau, sign)
            devs.append(abs(ratio / asymptote - 1.0))
        slopes = [math.log10(left / right) for left, right in zip(devs, devs[1:])]
        gap = max(abs(s - 1.0) for s in slopes)
        if gap >= worst:
            worst, worst_point = gap, {"sign": sign, "deviations": devs, "slopes": slopes}
    return VerificationReport(
        id="poly:gamma_asymptote",
        samples=2 * len(_ASYMPTOTE_TAUS),
        max_rel_residual=worst,
        worst_point=worst_point,
        converged_fraction=1.0,
        tol_rel=0.05,
        params={"a": a, "b": b},
        grid={"tau": list(_ASYMPTOTE_TAUS)},
    )


def _ultraspherical_growth(beta: float = 0.4, q: float = 0.5, n_fit: int = 200, n_check: int = 400) -> VerificationReport:
    values = poly_sequence(family_spec(PolyFamily.CQ_ULTRASPHERICAL, (beta,), q), n_check, np.asarray(CHEBYSHEV_GRID))
    peaks = np.max(np.abs(values), axis=1)
    fit = fit_growth_exponent(list(peaks[: n_fit + 1]))
    excess = fit.excess(np.arange(n_fit + 1, n_check + 1), peaks[n_fit + 1 :])
    return VerificationReport(
        id="growth:cq_ultraspherical",
        samples=n_check + 1,
        max_rel_residual=excess,
        worst_point={"sigma": fit.sigma, "K": fit.K},
        n_terms_used=n_fit,
        converged_fraction=1.0,
        tol_rel=1e-12,
        params={"beta": beta, "q": q},
        grid={"n_fit": n_fit, "n_check": n_check},
    )


def _polynomial_checks(_request: SuiteRequest, _services: "ServiceContainer") -> list[VerificationReport]:
    return [
        _series_against_recurrence(),
        *_ultraspherical_specialisations(0.4, 0.5),
        _gegenbauer_jacobi(),
        _chebyshev_cosine(),
        _gamma_asymptote(),
        _ultraspherical_growth(),
    ]


def _limit_chains(_request: SuiteRequest, _services: "ServiceContainer") -> list[VerificationReport]:
    return [verify_limit_chain(chain) for chain in ChainId]


# ---------------------------------------------------------------------------
# Orthogonality and integrals
# ---------------------------------------------------------------------------

ORTHOGONALITY_WEIGHTS: tuple[WeightSpec, ...] = (
    WeightSpec(PolyFamily.ASKEY_WILSON, (0.1, 0.2, 0.3, 0.4), 0.5),
    WeightSpec(PolyFamily.CQ_JACOBI, (0.2, 0.5), 0.5),
    WeightSpec(PolyFamily.CQ_ULTRASPHERICAL, (0.4,), 0.5),
    WeightSpec(PolyFamily.CQ_HERMITE, (), 0.5),
    WeightSpec(PolyFamily.CQ_LEGENDRE, (), 0.5),
    WeightSpec(PolyFamily.WILSON, (1.0, 1.5, 0.5, 2.0)),
    WeightSpec(PolyFamily.JACOBI, (0.3, 0.7)),
    WeightSpec(PolyFamily.GEGENBAUER, (0.7,)),
    WeightSpec(PolyFamily.CHEBYSHEV_T),
    WeightSpec(PolyFamily.LEGENDRE),
    WeightSpec(PolyFamily.LAGUERRE, (0.5,)),
)
_GROWTH_FAMILIES = (PolyFamily.ASKEY_WILSON, PolyFamily.CQ_ULTRASPHERICAL, PolyFamily.JACOBI)


def _orthogonality(_request: SuiteRequest, _services: "ServiceContainer") -> list[VerificationReport]:
    reports: list[VerificationReport] = []
    for w in ORTHOGONALITY_WEIGHTS:
        reports.extend(verify_orthogonality_block(w, 8))
    reports.extend(norm_growth_bound(w) for w in ORTHOGONALITY_WEIGHTS if w.family in _GROWTH_FAMILIES)
    return reports


_COROLLARY_Q = 0.5
_INTEGRAL_T = (0.1, 0.25)


def _corollary_cases(cor: CorollaryId, **overrides: Sequence[float]) -> list[dict[str, float]]:
    defaults = dict(COROLLARY_CATALOG[cor].defaults)
    axes = {name: overrides.get(name, (value,)) for name, value in defaults.items()}
    return list(_lattice(**axes))


def _run_corollaries(cases: Mapping[CorollaryId, list[dict[str, float]]]) -> list[VerificationReport]:
    reports = []
    for cor, samples in cases.items():
        q = _COROLLARY_Q if COROLLARY_CATALOG[cor].q_required else None
        runs = [verify_integral_corollary(cor, params, n_max=8, q=q) for params in samples]
        reports.append(merge_reports(f"integral:{cor.value}", runs))
    return reports


def _integrals(_request: SuiteRequest, _services: "ServiceContainer") -> list[VerificationReport]:
    return _run_corollaries(
        {
            CorollaryId.AW_INT: _corollary_cases(CorollaryId.AW_INT, t=_INTEGRAL_T),
            CorollaryId.CQJACOBI_INT: _corollary_cases(CorollaryId.CQJACOBI_INT, t=_INTEGRAL_T),
            CorollaryId.CQULTRA_INT: _corollary_cases(CorollaryId.CQULTRA_INT, t=_INTEGRAL_T),
            CorollaryId.GEGEN_STIELTJES: _corollary_cases(CorollaryId.GEGEN_STIELTJES, t=_INTEGRAL_T),
            CorollaryId.WILSON_INT: _corollary_cases(CorollaryId.WILSON_INT),
        }
    )


def _one_minus_x(_request: SuiteRequest, _services: "ServiceContainer") -> list[VerificationReport]:
    nus = (0.2, 0.5)
    return _run_corollaries(
        {
            CorollaryId.JACOBI_1MX_INT: _corollary_cases(CorollaryId.JACOBI_1MX_INT, nu=nus),
            CorollaryId.GEGEN_1MX_INT: _corollary_cases(CorollaryId.GEGEN_1MX_INT, nu=nus),
            # needs nu < 1/2
            CorollaryId.CHEBY_1MX_INT: _corollary_cases(CorollaryId.CHEBY_1MX_INT, nu=(0.2,)),
            CorollaryId.LAGUERRE_1MX_INT: _corollary_cases(CorollaryId.LAGUERRE_1MX_INT, nu=nus),
        }
    )


_L2_CASES = ((0.3, 0.6, 0.25, 0.5), (-0.3, 0.3, 0.4, 0.3))


def _l2_interchange(_request: SuiteRequest, _services: "ServiceContainer") -> list[VerificationReport]:
    reports = [verify_l2_interchange(beta, gamma, t, q) for beta, gamma, t, q in _L2_CASES]
    growth, _ = verify_coefficient_growth(IdentityId.ROGERS_GAMMA, {"beta": 0.3, "gamma": 0.6, "t": 0.25}, 0.5)
    return [merge_reports("l2_interchange", reports), growth]


STRUCTURAL_RUNNERS: dict[str, SuiteHandler] = {
    "qpoch_algebra": _qpoch_algebra,
    "qbinomial": _qbinomial,
    "inequalities": _inequalities,
    "connection": _connection,
    "quadratic_transform": _quadratic_transform,
    "wilson_termination": _wilson_termination,
    "heine_classical": _heine_classical,
    "polynomial_checks": _polynomial_checks,
    "limit_chains": _limit_chains,
    "orthogonality": _orthogonality,
    "integrals": _integrals,
    "one_minus_x": _one_minus_x,
    "l2_interchange": _l2_interchange,
}


# ---------------------------------------------------------------------------
# Identity suites
# ---------------------------------------------------------------------------


@dataclass(slots=True, frozen=True)
class ExpansionDefaults:
    """Default grid of one identity suite."""

    samples: tuple[dict[str, float], ...]
    n_terms: int = 60
    tol_rel: float = 1e-10
    x_points: tuple[float, ...] = CHEBYSHEV_GRID

    def grid(self, override: GridOverride | None) -> GridSpec:
        """Apply ``override`` on top of these defaults."""
        o = override or GridOverride()
        return GridSpec(
            x_points=list(o.x_points if o.x_points is not None else self.x_points),
            param_samples=[dict(s) for s in self.samples],
            n_terms=o.n_terms if o.n_terms is not None else self.n_terms,
            tol_rel=o.tol_rel if o.tol_rel is not None else self.tol_rel,
        )


_AW_SAMPLES = _lattice(a1=(0.1,), a2=(0.2,), a3=(0.3,), a4=(0.4,), beta=(0.3, 0.6), t=(0.1, 0.25), q=(0.5,))
_POWER_AXES = {"nu": (0.5, 1.3), "z": (1.5, 2.5)}

EXPANSION_DEFAULTS: dict[IdentityId, ExpansionDefaults] = {
    IdentityId.AW_ROGERS: ExpansionDefaults(_AW_SAMPLES, 40, 1e-8),
    IdentityId.CQJACOBI_ROGERS: ExpansionDefaults(
        _lattice(alpha=(0.2, 0.5), gamma=(0.2, 0.5), beta=(0.3, 0.6), t=(0.1, 0.25), q=(0.5,)), 40, 1e-8
    ),
    IdentityId.ROGERS_GAMMA: ExpansionDefaults(
        _lattice(beta=_SIGNED, gamma=_SIGNED, t=_T_VALUES, q=_Q_VALUES)
    ),
    IdentityId.ROGERS_GF: ExpansionDefaults(_lattice(beta=_SIGNED, t=_T_VALUES, q=_Q_VALUES)),
    IdentityId.CQHERMITE: ExpansionDefaults(_lattice(beta=_SIGNED, t=_T_VALUES, q=_Q_VALUES)),
    IdentityId.CQHERMITE_GF: ExpansionDefaults(_lattice(t=_T_VALUES, q=_Q_VALUES)),
    IdentityId.CHEBYSHEV_Q: ExpansionDefaults(
        _lattice(beta=_SIGNED, t=_T_VALUES, q=_Q_VALUES)
        + tuple({"beta": math.sqrt(q), "t": t, "q": q} for q in _Q_VALUES for t in _T_VALUES)
    ),
    IdentityId.CQLEGENDRE: ExpansionDefaults(
        _lattice(beta=_SIGNED, t=_T_VALUES, q=_Q_VALUES)
        + tuple({"beta": q, "t": t, "q": q} for q in _Q_VALUES for t in _T_VALUES)
    ),
    IdentityId.WILSON_LIMIT: ExpansionDefaults(
        tuple({**WILSON_PARAMS, "u": 0.5, "t": 0.5 + m} for m in range(4)), _WILSON_TERMS, 1e-8, WILSON_GRID
    ),
    IdentityId.GEGEN_GF_GENERAL: ExpansionDefaults(
        _lattice(beta=(0.3, 0.7), alpha=(0.3, 0.5), gamma=(0.5, 0.7), t=_T_VALUES), 60, 1e-9
    ),
    IdentityId.GEGEN_GF: ExpansionDefaults(_lattice(mu=(0.3, 0.7, 1.5), t=_T_VALUES)),
    IdentityId.GEGEN_GAMMA: ExpansionDefaults(
        _lattice(**{"lambda": (0.4, 1.2)}, mu=(0.7, 1.5), t=_T_VALUES), 60, 1e-9
    ),
    IdentityId.JACOBI_POW: ExpansionDefaults(
        tuple({**ab, **rest} for ab in ({"alpha": 0.3, "beta": 0.7}, {"alpha": 1.4, "beta": 0.5})
              for rest in _lattice(**_POWER_AXES)),
        60,
        1e-9,
    ),
    IdentityId.GEGEN_POW: ExpansionDefaults(_lattice(mu=(0.7, 1.5), **_POWER_AXES), 60, 1e-9),
    IdentityId.CHEBY_POW: ExpansionDefaults(_lattice(**_POWER_AXES), 60, 1e-9),
    IdentityId.LEGENDRE_POW: ExpansionDefaults(_lattice(**_POWER_AXES), 60, 1e-9),
    IdentityId.HEINE: ExpansionDefaults(_lattice(z=(1.5, 2.5))),
    IdentityId.HEINE_SQRT: ExpansionDefaults(_lattice(z=(1.5, 2.5)), 60, 1e-8),
}


@dataclass(slots=True, frozen=True)
class ProjectionDefaults:
    """Coefficient-projection check of an identity whose series converges too slowly pointwise."""

    samples: tuple[dict[str, float], ...]
    n_max: int = 8
    tol_rel: float = 1e-7


PROJECTION_DEFAULTS: dict[IdentityId, ProjectionDefaults] = {
    IdentityId.JACOBI_1MX: ProjectionDefaults(_lattice(alpha=(0.5,), beta=(0.5,), nu=(0.2, 0.5))),
    IdentityId.GEGEN_1MX: ProjectionDefaults(_lattice(mu=(0.7,), nu=(0.2, 0.5))),
    IdentityId.CHEBY_1MX: ProjectionDefaults(_lattice(nu=(0.2, 0.35))),
    IdentityId.LAGUERRE_1MX: ProjectionDefaults(_lattice(alpha=(0.5,), nu=(0.2, 0.5))),
}


def _rogers_gamma_degeneration(pol: TruncationPolicy, n_terms: int = 30) -> VerificationReport:
    """At ``beta = gamma`` the gamma expansion must collapse to the Rogers generating function."""

    tracker = ResidualTracker("rogers_gamma:beta_equals_gamma", 1e-13, n_terms_used=n_terms)
    for beta, t, q in itertools.product(_SIGNED, _T_VALUES, _Q_VALUES):
        general = coefficients(IdentityId.ROGERS_GAMMA, {"beta": beta, "gamma": beta, "t": t}, n_terms, q, pol)
        special = coefficients(IdentityId.ROGERS_GF, {"beta": beta, "t": t}, n_terms, q, pol)
        for n, (g, s) in enumerate(zip(general, special)):
            tracker.add(relative_error(s.value, g.value), {"beta": beta, "t": t, "q": q, "n": n}, converged=g.converged)
    return tracker.report()


def _gegen_gamma_szego(pol: TruncationPolicy, n_terms: int = 20) -> VerificationReport:
    """``(1+t^2-2tx)^-lambda = (2t)^-lambda (z-x)^-lambda`` with ``z = (t+1/t)/2``, compared coefficientwise."""

    tracker = ResidualTracker("gegen_gamma:szego", 1e-9, n_terms_used=n_terms)
    for lam, mu, t in itertools.product((0.4, 1.2), (0.7, 1.5), (0.25, 0.4)):
        z = (t + 1.0 / t) / 2.0
        gamma_side = coefficients(IdentityId.GEGEN_GAMMA, {"lambda": lam, "mu": mu, "t": t}, n_terms, None, pol)
        power_side = coefficients(IdentityId.GEGEN_POW, {"mu": mu, "nu": lam, "z": z}, n_terms, None, pol)
        scale = (2.0 * t) ** (-lam)
        for n, (g, p) in enumerate(zip(gamma_side, power_side)):
            point = {"lambda": lam, "mu": mu, "t": t, "n": n}
            tracker.add(relative_error(g.value, scale * p.value), point, converged=g.converged and p.converged)
    return tracker.report()


def _identity_extras(identity: IdentityId, grid: GridSpec, pol: TruncationPolicy) -> list[VerificationReport]:
    if identity is IdentityId.AW_ROGERS:
        rewritten = verify_expansion(identity, grid, vwp_rewrite=True, pol=pol)
        params = {key: value for key, value in _AW_SAMPLES[1].items() if key != "q"}
        return [
            rewritten.model_copy(update={"id": "aw_rogers:vwp_rewrite"}),
            verify_projection(identity, params, 4, 0.5),
        ]
    if identity is IdentityId.ROGERS_GAMMA:
        return [_rogers_gamma_degeneration(pol)]
    if identity is IdentityId.GEGEN_GAMMA:
        return [_gegen_gamma_szego(pol)]
    return []


def _expansion_runner(identity: IdentityId) -> SuiteHandler:
    defaults = EXPANSION_DEFAULTS[identity]

    def run(request: SuiteRequest, services: "ServiceContainer") -> list[VerificationReport]:
        grid = defaults.grid(request.override)
        report = verify_expansion(identity, grid, pol=services.policy)
        return [report, *_identity_extras(identity, grid, services.policy)]

    return run


def _projection_runner(identity: IdentityId) -> SuiteHandler:
    defaults = PROJECTION_DEFAULTS[identity]

    def run(request: SuiteRequest, _services: "ServiceContainer") -> list[VerificationReport]:
        override = request.override or GridOverride()
        n_max = override.n_terms - 1 if override.n_terms is not None else defaults.n_max
        tol = override.tol_rel if override.tol_rel is not None else defaults.tol_rel
        reports = [verify_projection(identity, params, n_max, tol_rel=tol) for params in defaults.samples]
        return [merge_reports(identity.value, reports)]

    return run


def identity_runner(identity: IdentityId | str) -> SuiteHandler:
    """Suite runner checking one expansion identity at its default grid."""

    identity = IdentityId(identity)
    if identity in PROJECTION_DEFAULTS:
        return _projection_runner(identity)
    return _expansion_runner(identity)


def register_default_suites(router: SuiteRouter) -> None:
    """Register every structural suite and one suite per expansion identity."""

    for name, handler in STRUCTURAL_RUNNERS.items():
        router.register(name, handler)
    for identity in IdentityId:
        router.register(identity.value, identity_runner(identity))
    logger.debug("[suites] registered %d suites", len(router.handlers()))


__all__ = [
    "CHEBYSHEV_GRID",
    "WILSON_GRID",
    "WILSON_PARAMS",
    "ORTHOGONALITY_WEIGHTS",
    "STRUCTURAL_RUNNERS",
    "EXPANSION_DEFAULTS",
    "PROJECTION_DEFAULTS",
    "ExpansionDefaults",
    "ProjectionDefaults",
    "merge_reports",
    "identity_runner",
    "register_default_suites",
]
