"""Identity verification: truncated expansions against their left-hand sides.

Every check returns a :class:`VerificationReport` built by
:class:`~rogers_engine.services.residuals.ResidualTracker`.
"""

from __future__ import annotations

import math
from typing import Any, Mapping, Sequence

import numpy as np
from numpy.typing import NDArray

from rogers_engine.core.exceptions import DomainViolation, NonConvergent
from rogers_engine.core.identities import ChainId, IdentityId, PolyFamily
from rogers_engine.core.logging import get_logger
from rogers_engine.core.models import (
    CoeffRequest,
    GridSpec,
    HypSpec,
    PhiSpec,
    QBase,
    TruncationPolicy,
    VerificationReport,
    WeightSpec,
)
from rogers_engine.services.expansions import (
    coefficient,
    coefficients,
    connection_coeff,
    expansion_partial_sums,
    lhs_values,
)
from rogers_engine.services.hyperseries import hyp, phi, vwp_phi_spec
from rogers_engine.services.polyfamilies import family_spec, poly_sequence, poly_values
from rogers_engine.services.qcore import (
    pochhammer_general,
    qpoch_general,
    qpoch_infinite_many,
    qpow,
)
from rogers_engine.services.quadrature import (
    GrowthFit,
    fit_growth_exponent,
    integrate_interval,
    poly_norm,
    project_coefficient,
)
from rogers_engine.services.residuals import (
    FAILURE_ERRORS,
    REL_FLOOR,
    ResidualTracker,
    plain,
    plain_map,
    relative_error,
    relative_residual,
)

logger = get_logger(__name__)

FloatArray = NDArray[np.float64]

DEFAULT_Q_SEQ: tuple[float, ...] = (0.9, 0.99, 0.999)


def _split_q(sample: Mapping[str, float]) -> tuple[dict[str, float], float | None]:
    params = {key: value for key, value in sample.items() if key != "q"}
    return params, sample.get("q")


def _record_points(
    tracker: ResidualTracker,
    residuals: FloatArray,
    xs: FloatArray,
    sample: Mapping[str, Any],
    converged: bool,
) -> None:
    for x, residual in zip(xs, residuals):
        tracker.add(float(residual), {**sample, "x": float(x)}, converged=converged)


def verify_expansion(
    identity: IdentityId | str,
    grid: GridSpec,
    *,
    vwp_rewrite: bool = False,
    pol: TruncationPolicy | None = None,
) -> VerificationReport:
    """``LHS(x)`` against ``sum_{n < N} coefficient_n P_n(x)`` on every grid point.

    Sample maps may carry the base under the key ``q``.
    """

    identity = IdentityId(identity)
    tracker = ResidualTracker(identity.value, grid.tol_rel, n_terms_used=grid.n_terms)
    xs = np.asarray(grid.x_points, dtype=np.float64)
    for sample in grid.param_samples:
        params, q = _split_q(sample)
        try:
            lhs = lhs_values(identity, params, xs, q, pol)
            sums, converged = expansion_partial_sums(
                identity, params, xs, grid.n_terms, q, pol, vwp_rewrite=vwp_rewrite
            )
        except FAILURE_ERRORS as exc:
            tracker.fail(sample, exc)
            continue
        except NonConvergent as exc:
            tracker.nonconvergent(sample, exc)
            continue
        _record_points(tracker, relative_residual(lhs, sums[-1]), xs, sample, converged)
    return tracker.report(
        params={"samples": [dict(s) for s in grid.param_samples]},
        grid={"x_points": list(grid.x_points), "n_terms": grid.n_terms},
    )


def truncation_profile(
    identity: IdentityId | str,
    grid: GridSpec,
    n_values: Sequence[int] = (20, 40, 80),
) -> list[float]:
    """Maximum residual over the grid for each truncation length."""

    identity = IdentityId(identity)
    xs = np.asarray(grid.x_points, dtype=np.float64)
    worst = [0.0] * len(n_values)
    for sample in grid.param_samples:
        params, q = _split_q(sample)
        lhs = lhs_values(identity, params, xs, q)
        sums, _ = expansion_partial_sums(identity, params, xs, max(n_values), q)
        for i, n in enumerate(n_values):
            worst[i] = max(worst[i], float(np.max(relative_residual(lhs, sums[n - 1]))))
    return worst


def verify_projection(
    identity: IdentityId | str,
    params: Mapping[str, float],
    n_max: int,
    q: float | None = None,
    *,
    tol_rel: float = 1e-7,
) -> VerificationReport:
    """Closed-form coefficients against ``<LHS, P_n> / ||P_n||^2`` for ``n <= n_max``."""

    identity = IdentityId(identity)
    tracker = ResidualTracker(f"projection:{identity.value}", tol_rel)
    policy = TruncationPolicy.from_settings()
    base = QBase.of(q) if q is not None else None
    for n in range(n_max + 1):
        point = {**params, "n": n}
        try:
            closed = coefficient(CoeffRequest(identity, n, params, base, policy))
            projected = project_coefficient(identity, params, n, base, policy)
        except FAILURE_ERRORS as exc:
            tracker.fail(point, exc)
            continue
        except NonConvergent as exc:
            tracker.nonconvergent(point, exc)
            continue
        tracker.n_terms_used = max(tracker.n_terms_used, projected.nodes_used)
        residual = relative_error(closed.value, projected.value)
        tracker.add(float(residual), point, converged=closed.converged)
    grid = {"n_max": n_max}
    return tracker.report(params={**params, **({"q": q} if q is not None else {})}, grid=grid)


def verify_connection(
    n_max: int,
    beta: complex,
    gamma: complex,
    q: QBase | complex,
    x_points: Sequence[float],
    *,
    tol_rel: float = 1e-11,
) -> VerificationReport:
    """``C_n(x;beta|q)`` against its expansion over ``C_{n-2k}(x;gamma|q)`` for ``n <= n_max``."""

    if not 0 <= n_max <= 30:
        raise DomainViolation(f"connection checks take n_max <= 30, got {n_max}")
    xs = np.asarray(x_points, dtype=np.float64)
    if np.unique(xs).size < n_max + 1:
        raise DomainViolation(f"need at least {n_max + 1} distinct points, got {np.unique(xs).size}")
    base = QBase.of(q)
    left = poly_sequence(family_spec(PolyFamily.CQ_ULTRASPHERICAL, (beta,), base.q), n_max, xs)
    right = poly_sequence(family_spec(PolyFamily.CQ_ULTRASPHERICAL, (gamma,), base.q), n_max, xs)
    tracker = ResidualTracker("connection", tol_rel, n_terms_used=n_max)
    for n in range(n_max + 1):
        total = sum(connection_coeff(n, k, beta, gamma, base) * right[n - 2 * k] for k in range(n // 2 + 1))
        _record_points(tracker, relative_residual(left[n], total), xs, {"n": n}, True)
    params = {"beta": plain(complex(beta)), "gamma": plain(complex(gamma)), "q": plain(base.q)}
    return tracker.report(params=params, grid={"n_max": n_max, "x_points": [float(x) for x in xs]})


def quadratic_transform_sides(
    a: complex, b: complex, t: complex, q: QBase | complex, pol: TruncationPolicy | None = None
) -> tuple[complex, complex]:
    """The 2phi1 side and the product-times-8phi7 side of the quadratic transformation."""

    base = QBase.of(q)
    qv = base.q
    if b == 0:
        raise DomainViolation("the quadratic transformation needs b != 0")
    if not (abs(qv * t * t) < 1 and abs(qv * t) < 1):
        raise DomainViolation("the quadratic transformation needs |q t^2| < 1 and |q t| < 1")
    left = phi(PhiSpec((a, b), (qv * a / b,), base, qv * t * t), pol)
    top = qpoch_infinite_many([qv * (a * t) ** 2, qv * a / b * t, qv * t], qv, pol)
    bottom = qpoch_infinite_many([qv * a * a / b * t, qv * a * t, qv * t * t], qv, pol)
    if bottom.value == 0:
        raise NonConvergent("quadratic transformation prefactor denominator vanishes")
    big_a = a * a / b * t
    half = qpow(qv, 0.5)
    rest = [half * a / b, -half * a / b, -a / b, b * t, a]
    # q A / rest, written out so that a = 0 and t = 0 stay finite
    den = [half * a * t, -half * a * t, -qv * a * t, qv * a * a / (b * b), qv * a * t / b]
    right = phi(vwp_phi_spec(big_a, rest, base, qv * t, den), pol)
    return left.value, top.value / bottom.value * right.value


def verify_quadratic_transform(
    a: complex,
    b: complex,
    t: complex,
    q: QBase | complex,
    pol: TruncationPolicy | None = None,
    *,
    tol_rel: float = 1e-10,
) -> VerificationReport:
    """Both sides of the quadratic transformation at ``t`` and at ``-t``."""

    tracker = ResidualTracker("quadratic_transform", tol_rel)
    base = QBase.of(q)
    point = {"a": a, "b": b, "q": base.q}
    for sign in (1, -1):
        try:
            left, right = quadratic_transform_sides(a, b, sign * t, base, pol)
        except FAILURE_ERRORS as exc:
            tracker.fail({**point, "t": sign * t}, exc)
            continue
        except NonConvergent as exc:
            tracker.nonconvergent({**point, "t": sign * t}, exc)
            continue
        residual = relative_error(left, right)
        tracker.add(residual, {**point, "t": sign * t})
    return tracker.report(params=plain_map({**point, "t": t}))


def quadratic_gauss_sides(a: float, b: float, t: float, sign: int = 1) -> tuple[complex, complex]:
    """Both sides of the classical quadratic transformation of 2F1 for one sign."""

    w = sign * 4.0 * t / (1.0 + sign * t) ** 2
    if not abs(w) < 1.0:
        raise DomainViolation(f"|{'+' if sign > 0 else '-'}4t/(1{'+' if sign > 0 else '-'}t)^2| must be < 1")
    left = hyp(HypSpec((a, b), (a - b + 1.0,), t * t)).value
    right = (1.0 + sign * t) ** (-2.0 * a) * hyp(HypSpec((a, a - b + 0.5), (2.0 * a - 2.0 * b + 1.0,), w)).value
    return left, right


def verify_quadratic_gauss(a: float, b: float, t: float, *, tol_rel: float = 1e-12) -> VerificationReport:
    """The classical quadratic transformation for each sign whose argument converges."""

    tracker = ResidualTracker("quadratic_gauss", tol_rel)
    for sign in (1, -1):
        if abs(4.0 * t / (1.0 + sign * t) ** 2) >= 1.0:
            continue
        left, right = quadratic_gauss_sides(a, b, t, sign)
        tracker.add(relative_error(left, right), {"a": a, "b": b, "t": t, "sign": sign})
    return tracker.report(params={"a": a, "b": b, "t": t})


# ---------------------------------------------------------------------------
# Limit chains
# ---------------------------------------------------------------------------

CHAIN_DEFAULTS: dict[ChainId, dict[str, float]] = {
    ChainId.POCHHAMMER: {"alpha": 1.3, "beta": 0.7},
    ChainId.CQJACOBI_JACOBI: {"n": 3, "alpha": 0.5, "gamma": 0.5, "x": 0.2},
    ChainId.CQLEGENDRE_LEGENDRE: {"n": 4, "x": 0.3},
    ChainId.CQULTRA_GEGENBAUER: {"n": 4, "mu": 0.7, "x": 0.3},
    ChainId.CQULTRA_HERMITE: {"n": 3, "q": 0.5, "x": 0.3},
    ChainId.CQULTRA_CHEBYSHEV: {"n": 4, "q": 0.5, "x": 0.3},
    ChainId.ROGERS_GAMMA_GEGENBAUER: {"n": 3, "lambda": 0.4, "mu": 0.7, "t": 0.25},
    ChainId.QUADRATIC_GAUSS: {"a": 0.3, "b": 0.5, "t": 0.25},
}


def _single_poly(family: PolyFamily, params: tuple[complex, ...], q: float | None, n: int, x: float) -> complex:
    return complex(poly_values(family_spec(family, params, q), n, np.asarray([x]), "recurrence")[0])


def _chain_pair(chain: ChainId, s: float, p: Mapping[str, float]) -> tuple[complex, complex]:
    """Approximant at sequence value ``s`` and the classical target."""

    if chain is ChainId.POCHHAMMER:
        alpha, beta = p["alpha"], p["beta"]
        approx = qpoch_general(s**alpha, s, beta).value / (1.0 - s) ** beta
        return approx, pochhammer_general(alpha, beta)
    n, x = int(p.get("n", 0)), p.get("x", 0.0)
    if chain is ChainId.CQJACOBI_JACOBI:
        alpha, gamma = p["alpha"], p["gamma"]
        approx = _single_poly(PolyFamily.CQ_JACOBI, (s ** (alpha + 0.5), s ** (gamma + 0.5)), s, n, x)
        return approx, _single_poly(PolyFamily.JACOBI, (alpha, gamma), None, n, x)
    if chain is ChainId.CQLEGENDRE_LEGENDRE:
        return _single_poly(PolyFamily.CQ_LEGENDRE, (), s, n, x), _single_poly(PolyFamily.LEGENDRE, (), None, n, x)
    if chain is ChainId.CQULTRA_GEGENBAUER:
        mu = p["mu"]
        approx = _single_poly(PolyFamily.CQ_ULTRASPHERICAL, (s**mu,), s, n, x)
        return approx, _single_poly(PolyFamily.GEGENBAUER, (mu,), None, n, x)
    if chain is ChainId.CQULTRA_HERMITE:
        # beta = 1 - s -> 0: (q;q)_n C_n(x;beta|q) -> H_n(x|q)
        q = p["q"]
        scale = complex(np.prod(1.0 - q ** np.arange(1, n + 1)))
        approx = scale * _single_poly(PolyFamily.CQ_ULTRASPHERICAL, (1.0 - s,), q, n, x)
        return approx, _single_poly(PolyFamily.CQ_HERMITE, (), q, n, x)
    if chain is ChainId.CQULTRA_CHEBYSHEV:
        # beta = q^(1-s) -> 1: (1-q^n) C_n(x;beta|q) / (2(1-beta)) -> T_n(x)
        q = p["q"]
        beta = q ** (1.0 - s)
        approx = (1.0 - q**n) / (2.0 * (1.0 - beta)) * _single_poly(PolyFamily.CQ_ULTRASPHERICAL, (beta,), q, n, x)
        return approx, _single_poly(PolyFamily.CHEBYSHEV_T, (), None, n, x)
    if chain is ChainId.ROGERS_GAMMA_GEGENBAUER:
        lam, mu, t = p["lambda"], p["mu"], p["t"]
        approx = coefficient(
            CoeffRequest(IdentityId.ROGERS_GAMMA, n, {"beta": s**lam, "gamma": s**mu, "t": t}, QBase.of(s))
        ).value
        target = coefficient(CoeffRequest(IdentityId.GEGEN_GAMMA, n, {"lambda": lam, "mu": mu, "t": t})).value
        return approx, target
    a, b, t = p["a"], p["b"], p["t"]
    approx = phi(PhiSpec((s**a, s**b), (s ** (1.0 + a - b),), s, s * t * t)).value
    return approx, hyp(HypSpec((a, b), (a - b + 1.0,), t * t)).value


def verify_limit_chain(
    chain: ChainId | str,
    q_seq: Sequence[float] | None = None,
    params: Mapping[str, float] | None = None,
    *,
    tol: float = 1e-3,
) -> VerificationReport:
    """Errors against the classical target along ``q_seq``.

    The report's residual is the final error when the errors decrease
    monotonically and the largest error otherwise.
    """

    chain = ChainId(chain)
    seq = tuple(q_seq) if q_seq is not None else DEFAULT_Q_SEQ
    if any(not 0.0 < s < 1.0 for s in seq) or any(b <= a for a, b in zip(seq, seq[1:])):
        raise DomainViolation(f"q_seq must increase strictly inside (0, 1), got {seq}")
    p = {**CHAIN_DEFAULTS[chain], **(params or {})}
    errors = []
    for s in seq:
        approx, target = _chain_pair(chain, s, p)
        errors.append(relative_error(target, approx))
    monotone = all(b < a for a, b in zip(errors, errors[1:]))
    residual = errors[-1] if monotone else max(errors)
    logger.debug("[verifier] chain %s errors %s", chain.value, errors)
    return VerificationReport(
        id=f"limit:{chain.value}",
        samples=len(seq),
        max_rel_residual=float(residual),
        worst_point={"errors": [float(e) for e in errors], "monotone": monotone},
        n_terms_used=0,
        converged_fraction=1.0,
        tol_rel=tol,
        params=plain_map(p),
        grid={"q_seq": list(seq)},
    )


def verify_heine_classical(
    z: float,
    n_terms: int,
    *,
    reciprocal_sqrt: bool = False,
    x_points: Sequence[float] | None = None,
    tol_rel: float | None = None,
) -> VerificationReport:
    """Heine's expansion of ``1/(z-x)`` (or of ``1/sqrt(z-x)``) truncated at ``n_terms``."""

    if not 1.1 <= z <= 3.0:
        raise DomainViolation(f"Heine checks take z in [1.1, 3], got {z}")
    xs = list(x_points) if x_points is not None else [float(x) for x in np.linspace(-0.9, 0.9, 19)]
    identity = IdentityId.HEINE_SQRT if reciprocal_sqrt else IdentityId.HEINE
    tol = tol_rel if tol_rel is not None else (1e-8 if reciprocal_sqrt else 1e-10)
    grid = GridSpec(x_points=xs, param_samples=[{"z": z}], n_terms=n_terms, tol_rel=tol)
    return verify_expansion(identity, grid)


# ---------------------------------------------------------------------------
# L^2 interchange and growth
# ---------------------------------------------------------------------------


def l2_partial_sums(
    beta: float, gamma: float, t: float, q: float, n_max: int = 40
) -> tuple[FloatArray, float]:
    """``sum_{k <= N} |d_k|^2 s_k`` for the gamma expansion and the weighted ``L^2`` norm of its LHS.

    ``s_k`` is the squared norm of ``C_k(x;gamma|q)``; the partial sums increase
    to the norm by Parseval.
    """

    params = {"beta": beta, "gamma": gamma, "t": t}
    coeffs = coefficients(IdentityId.ROGERS_GAMMA, params, n_max + 1, q)
    w = WeightSpec(PolyFamily.CQ_ULTRASPHERICAL, (gamma,), QBase.of(q))
    norms = np.array([abs(poly_norm(w, k)) for k in range(n_max + 1)])
    partial = np.cumsum(np.abs([c.value for c in coeffs]) ** 2 * norms)
    lhs_norm = integrate_interval(lambda x: np.abs(lhs_values(IdentityId.ROGERS_GAMMA, params, x, q)) ** 2, w)
    return partial, float(lhs_norm.value.real)


def verify_l2_interchange(
    beta: float, gamma: float, t: float, q: float, n_max: int = 40, *, tol_rel: float = 1e-9
) -> VerificationReport:
    """Partial sums must be increasing, Cauchy and converge to the ``L^2`` norm of the LHS."""

    partial, target = l2_partial_sums(beta, gamma, t, q, n_max)
    increasing = bool(np.all(np.diff(partial) >= -1e-15 * partial[-1]))
    cauchy_gap = float(partial[-1] - partial[n_max // 2]) / max(abs(target), REL_FLOOR)
    residual = relative_error(target, float(partial[-1]))
    return VerificationReport(
        id="l2_interchange:rogers_gamma",
        samples=n_max + 1,
        max_rel_residual=float(residual if increasing else math.inf),
        worst_point={"cauchy_gap": cauchy_gap, "increasing": increasing, "limit": target},
        n_terms_used=n_max,
        converged_fraction=1.0,
        tol_rel=tol_rel,
        params={"beta": beta, "gamma": gamma, "t": t, "q": q},
        grid={"n_max": n_max},
    )


def verify_coefficient_growth(
    identity: IdentityId | str,
    params: Mapping[str, float],
    q: float | None = None,
    *,
    n_fit: int = 200,
    n_check: int = 400,
) -> tuple[VerificationReport, GrowthFit]:
    """Fit ``|c_n| <= K (n+1)^sigma |t|^n |c_0|`` on ``n <= n_fit`` and test it up to ``n_check``."""

    identity = IdentityId(identity)
    ratio = abs(params["t"]) if "t" in params else 1.0
    values = [c.value for c in coefficients(identity, params, n_check + 1, q)]
    fit = fit_growth_exponent(values[: n_fit + 1], ratio)
    excess = fit.excess(np.arange(n_fit + 1, n_check + 1), values[n_fit + 1 :])
    report = VerificationReport(
        id=f"growth:{identity.value}",
        samples=n_check + 1,
        max_rel_residual=excess,
        worst_point={"sigma": fit.sigma, "K": fit.K},
        n_terms_used=n_fit,
        converged_fraction=1.0,
        tol_rel=1e-12,
        params={**params, **({"q": q} if q is not None else {})},
        grid={"n_fit": n_fit, "n_check": n_check},
    )
    return report, fit


__all__ = [
    "DEFAULT_Q_SEQ",
    "CHAIN_DEFAULTS",
    "verify_expansion",
    "truncation_profile",
    "verify_projection",
    "verify_connection",
    "quadratic_transform_sides",
    "verify_quadratic_transform",
    "quadratic_gauss_sides",
    "verify_quadratic_gauss",
    "verify_limit_chain",
    "verify_heine_classical",
    "l2_partial_sums",
    "verify_l2_interchange",
    "verify_coefficient_growth",
    "fit_growth_exponent",
]
