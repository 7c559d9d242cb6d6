"""Expansion coefficients and left-hand sides of the generating-function identities.

Each identity reads ``LHS(x) = sum_n coefficient(n) * P_n(x)`` where ``P_n`` is the
identity's target family. Every ``t^n`` power, Neumann factor and prefactor is
folded into the coefficient so the sum needs no per-identity handling.
"""

from __future__ import annotations

import cmath
import math
from typing import Callable, Mapping

import numpy as np
from numpy.typing import ArrayLike, NDArray

from rogers_engine.core.exceptions import BranchDomain, DenominatorPole, DomainViolation, NonConvergent
from rogers_engine.core.identities import IDENTITY_CATALOG, IdentityId, PolyFamily
from rogers_engine.core.logging import get_logger
from rogers_engine.core.models import (
    CoeffRequest,
    EvalResult,
    HypSpec,
    PhiSpec,
    PolySpec,
    QBase,
    TruncationPolicy,
)
from rogers_engine.services.hyperseries import hyp, phi, vwp_phi, vwp_phi_spec, vwp_W
from rogers_engine.services.polyfamilies import (
    jacobi_fn_second_decaying,
    legendre_q2,
    poly_sequence,
    unit_exponential,
)
from rogers_engine.services.qcore import (
    gamma_ratio,
    is_nonpositive_integer,
    log_gamma_values,
    qpoch_finite,
    qpoch_infinite_many,
    qpoch_infinite_values,
    qpow,
    rising_factorial,
)

logger = get_logger(__name__)

ComplexArray = NDArray[np.complex128]
Params = Mapping[str, complex]

_SQRT_PI = math.sqrt(math.pi)


def neumann(n: int) -> int:
    """Neumann factor: 1 for n = 0, else 2."""

    return 1 if n == 0 else 2


def _exact(value: complex) -> EvalResult:
    return EvalResult(complex(value), 0, True, 0.0)


def _combine(prefactor: complex, series: EvalResult, products: EvalResult | None = None) -> EvalResult:
    value = prefactor * series.value
    converged = series.converged and (products is None or products.converged)
    return EvalResult(value, series.terms_used, converged, abs(prefactor) * series.tail_bound)


def _products(num: list[complex], den: list[complex], q: complex, pol: TruncationPolicy):
    top = qpoch_infinite_many(num, q, pol)
    bottom = qpoch_infinite_many(den, q, pol)
    if bottom.value == 0:
        raise DenominatorPole("infinite product in a coefficient denominator vanishes")
    return top.value / bottom.value, EvalResult(
        top.value / bottom.value, max(top.terms_used, bottom.terms_used), top.converged and bottom.converged
    )


def _poch_gamma(nu: complex, n: int, num: list[complex], den: list[complex]) -> complex:
    """``(nu)_n * prod Gamma(num) / prod Gamma(den)`` without overflow."""

    if is_nonpositive_integer(nu):
        return rising_factorial(nu, n) * gamma_ratio(num, den)
    return gamma_ratio([nu + n, *num], [nu, *den])


# ---------------------------------------------------------------------------
# q-identities
# ---------------------------------------------------------------------------


def _vwp(a: complex, rest: list[complex], q: complex, z: complex, req: CoeffRequest) -> EvalResult:
    if abs(z) >= 1.0:
        raise DomainViolation(f"very-well-poised argument must satisfy |z| < 1, got {abs(z):.6g}")
    if req.vwp_rewrite:
        return vwp_phi(a, rest, q, z, req.pol)
    return phi(vwp_phi_spec(a, rest, q, z), req.pol)


def _aw_rogers(req: CoeffRequest) -> EvalResult:
    n, q = req.n, req.q.q  # type: ignore[union-attr]
    a1, a2, a3, a4 = (req.p(f"a{i}") for i in range(1, 5))
    beta, t = req.p("beta"), req.p("t")
    if a4 == 0:
        raise DomainViolation("aw_rogers needs a4 != 0")
    qn = q**n
    ratio, products = _products(
        [qn * a1 * beta * t, qn * a2 * beta * t, qn * a3 * beta * t, qn * a1 * a2 * a3 * t],
        [a1 * t, a2 * t, a3 * t, qn * qn * a1 * a2 * a3 * beta * t],
        q,
        req.pol,
    )
    prefactor = (
        t**n * qpoch_finite(beta, q, n) * ratio
        / (qpoch_finite(q, q, n) * qpoch_finite(qn / q * a1 * a2 * a3 * a4, q, n))
    )
    big_a = qn * qn / q * a1 * a2 * a3 * beta * t
    rest = [qn * a1 * a2, qn * a1 * a3, qn * a2 * a3, beta * t / a4, qn * beta]
    return _combine(prefactor, _vwp(big_a, rest, q, a4 * t, req), products)


def _cqjacobi_rogers(req: CoeffRequest) -> EvalResult:
    n, q = req.n, req.q.q  # type: ignore[union-attr]
    alpha, gamma = req.p("alpha"), req.p("gamma")
    beta, t = req.p("beta"), req.p("t")
    sa, sg, sq = cmath.sqrt(alpha), cmath.sqrt(gamma), cmath.sqrt(q)
    qn = q**n
    ratio, products = _products(
        [qn * sa * beta * t, -qn * sg * beta * t, -qn * sq * sg * beta * t, qn * sq * sa * gamma * t],
        [sa * t, -sg * t, -sq * sg * t, qn * qn * sq * sa * gamma * beta * t],
        q,
        req.pol,
    )
    prefactor = (
        (t / sa) ** n
        * qpoch_finite(beta, q, n) * qpoch_finite(-sa * sg, q, n) * qpoch_finite(-sq * sa * sg, q, n)
        / qpoch_finite(qn * alpha * gamma, q, n)
        * ratio
    )
    big_a = qn * qn / sq * sa * gamma * beta * t
    rest = [-qn * sa * sg, -qn * sq * sa * sg, qn * sq * gamma, beta * t / (sq * sa), qn * beta]
    return _combine(prefactor, _vwp(big_a, rest, q, sq * sa * t, req), products)


def _rogers_gamma(req: CoeffRequest) -> EvalResult:
    n, q = req.n, req.q.q  # type: ignore[union-attr]
    beta, gamma, t = req.p("beta"), req.p("gamma"), req.p("t")
    if gamma == 0:
        raise DomainViolation("rogers_gamma needs gamma != 0")
    denominator = qpoch_finite(gamma, q, n)
    if denominator == 0:
        raise DenominatorPole(f"(gamma;q)_n vanishes at n={n}", index=n)
    prefactor = qpoch_finite(beta, q, n) / denominator * t**n
    series = phi(PhiSpec((beta / gamma, beta * q**n), (gamma * q ** (n + 1),), q, gamma * t * t), req.pol)
    return _combine(prefactor, series)


def _cqhermite(req: CoeffRequest) -> EvalResult:
    n, q = req.n, req.q.q  # type: ignore[union-attr]
    beta, t = req.p("beta"), req.p("t")
    prefactor = qpoch_finite(beta, q, n) / qpoch_finite(q, q, n) * t**n
    series = phi(PhiSpec((beta * q**n,), (0.0,), q, beta * t * t), req.pol)
    return _combine(prefactor, series)


def _chebyshev_q(req: CoeffRequest) -> EvalResult:
    n, q = req.n, req.q.q  # type: ignore[union-attr]
    beta, t = req.p("beta"), req.p("t")
    prefactor = neumann(n) * qpoch_finite(beta, q, n) / qpoch_finite(q, q, n) * t**n
    series = phi(PhiSpec((beta, beta * q**n), (q ** (n + 1),), q, t * t), req.pol)
    return _combine(prefactor, series)


def _cqlegendre(req: CoeffRequest) -> EvalResult:
    n, q = req.n, req.q.q  # type: ignore[union-attr]
    beta, t = req.p("beta"), req.p("t")
    root = qpow(q, 0.5)
    prefactor = qpoch_finite(beta, q, n) / qpoch_finite(root, q, n) * (t / qpow(q, 0.25)) ** n
    series = phi(PhiSpec((beta / root, beta * q**n), (q**n * q * root,), q, root * t * t), req.pol)
    return _combine(prefactor, series)


def _rogers_gf(req: CoeffRequest) -> EvalResult:
    return _exact(req.p("t") ** req.n)


def _cqhermite_gf(req: CoeffRequest) -> EvalResult:
    q = req.q.q  # type: ignore[union-attr]
    return _exact(req.p("t") ** req.n / qpoch_finite(q, q, req.n))


# ---------------------------------------------------------------------------
# Classical identities
# ---------------------------------------------------------------------------


def _wilson_limit(req: CoeffRequest) -> EvalResult:
    n = req.n
    a1, a2, a3, a4 = (req.p(f"a{i}") for i in range(1, 5))
    u, t = req.p("u"), req.p("t")
    a123 = a1 + a2 + a3
    a1234 = a123 + a4
    leading = rising_factorial(u - t, n)
    if leading == 0:
        return _exact(0.0)
    prefactor = gamma_ratio([a123 + u, a1 + t, a2 + t, a3 + t], [a123 + t, a1 + u, a2 + u, a3 + u])
    numerator = leading * rising_factorial(a1234 - 1.0, n) * rising_factorial(a123 + u, 2 * n)
    denominator = (
        math.factorial(n)
        * rising_factorial(a1 + u, n) * rising_factorial(a2 + u, n) * rising_factorial(a3 + u, n)
        * rising_factorial(a123 + t, n) * rising_factorial(a1234 - 1.0, 2 * n)
    )
    if denominator == 0:
        raise DenominatorPole(f"wilson_limit coefficient denominator vanishes at n={n}", index=n)
    lam = 2 * n - 1 + a123 + u
    series = vwp_W(lam, a1 + a2 + n, a1 + a3 + n, a2 + a3 + n, u - a4, u - t + n, req.pol)
    return _combine(prefactor * numerator / denominator, series)


def _gegen_gf_general(req: CoeffRequest) -> EvalResult:
    n = req.n
    beta, t = req.p("beta"), req.p("t")
    alpha, gamma = req.p("alpha"), req.p("gamma")
    s = alpha + gamma + 1.0
    w = 4.0 * t / (1.0 + t) ** 2
    if abs(w) >= 1.0:
        raise DomainViolation(f"gegen_gf_general needs |4t/(1+t)^2| < 1, got {abs(w):.6g}")
    prefactor = (
        t**n * rising_factorial(beta, n) * rising_factorial(s, n)
        / (rising_factorial(s / 2.0, n) * rising_factorial((s + 1.0) / 2.0, n))
        * cmath.exp(-2.0 * (n + beta) * cmath.log(1.0 + t))
    )
    series = hyp(HypSpec((gamma + n + 1.0, n + beta), (2.0 * n + s + 1.0,), w), req.pol)
    return _combine(prefactor, series)


def _gegen_gamma(req: CoeffRequest) -> EvalResult:
    n = req.n
    lam, mu, t = req.p("lambda"), req.p("mu"), req.p("t")
    prefactor = rising_factorial(lam, n) / rising_factorial(mu, n) * t**n
    series = hyp(HypSpec((lam - mu, lam + n), (mu + n + 1.0,), t * t), req.pol)
    return _combine(prefactor, series)


def _gegen_gf(req: CoeffRequest) -> EvalResult:
    return _exact(req.p("t") ** req.n)


def _real_z(req: CoeffRequest) -> complex:
    z = req.p("z")
    if z.imag != 0 or z.real <= 1.0:
        raise BranchDomain(f"{req.id.value} needs real z > 1, got {z}")
    return z


def _nonzero_gamma_nu(req: CoeffRequest) -> complex:
    nu = req.p("nu")
    if is_nonpositive_integer(nu):
        raise DomainViolation(f"{req.id.value} needs nu outside -N0, got {nu}")
    return nu


def _jacobi_pow(req: CoeffRequest) -> EvalResult:
    n = req.n
    alpha, beta, nu = req.p("alpha"), req.p("beta"), req.p("nu")
    z = _real_z(req)
    log_front = (
        (alpha + 1.0 - nu) * cmath.log(z - 1.0)
        + (beta + 1.0 - nu) * cmath.log(z + 1.0)
        - (alpha + beta + 1.0 - nu) * math.log(2.0)
    )
    ratio = _poch_gamma(nu, n, [alpha + beta + n + 1.0], [alpha + n + 1.0, beta + n + 1.0])
    if ratio == 0:
        return _exact(0.0)
    q_fn = jacobi_fn_second_decaying(n + nu - 1.0, alpha + 1.0 - nu, beta + 1.0 - nu, z)
    return _exact(cmath.exp(log_front) * (2 * n + alpha + beta + 1.0) * ratio * q_fn)


def _gegen_pow(req: CoeffRequest) -> EvalResult:
    n = req.n
    mu = req.p("mu")
    nu = _nonzero_gamma_nu(req)
    z = _real_z(req)
    front = (
        2.0 ** (mu + 0.5) * gamma_ratio([mu], [nu]) / _SQRT_PI
        * cmath.exp(1j * math.pi * (mu - nu + 0.5))
        * cmath.exp(-((nu - mu) / 2.0 - 0.25) * cmath.log(z * z - 1.0))
    )
    return _exact(front * (n + mu) * legendre_q2(n + mu - 0.5, nu - mu - 0.5, z))


def _cheby_pow(req: CoeffRequest) -> EvalResult:
    n = req.n
    nu = _nonzero_gamma_nu(req)
    z = _real_z(req)
    front = (
        math.sqrt(2.0 / math.pi) * cmath.exp(1j * math.pi * (0.5 - nu)) * gamma_ratio([], [nu])
        * cmath.exp(-(nu / 2.0 - 0.25) * cmath.log(z * z - 1.0))
    )
    return _exact(front * neumann(n) * legendre_q2(n - 0.5, nu - 0.5, z))


def _legendre_pow(req: CoeffRequest) -> EvalResult:
    n = req.n
    nu = _nonzero_gamma_nu(req)
    z = _real_z(req)
    front = (
        cmath.exp(1j * math.pi * (1.0 - nu)) * gamma_ratio([], [nu])
        * cmath.exp((1.0 - nu) / 2.0 * cmath.log(z * z - 1.0))
    )
    return _exact(front * (2 * n + 1) * legendre_q2(n, nu - 1.0, z))


def _heine(req: CoeffRequest) -> EvalResult:
    z = _real_z(req)
    return _exact((2 * req.n + 1) * legendre_q2(req.n, 0.0, z))


def _heine_sqrt(req: CoeffRequest) -> EvalResult:
    z = _real_z(req)
    return _exact(math.sqrt(2.0) / math.pi * neumann(req.n) * legendre_q2(req.n - 0.5, 0.0, z))


def _require_positive(value: complex, label: str, req: CoeffRequest) -> None:
    if not value.real > 0:
        raise DomainViolation(f"{req.id.value} needs Re({label}) > 0, got {value.real:.6g}")


def _jacobi_1mx(req: CoeffRequest) -> EvalResult:
    n = req.n
    alpha, beta, nu = req.p("alpha"), req.p("beta"), req.p("nu")
    _require_positive(alpha - nu + 1.0, "alpha-nu+1", req)
    ratio = _poch_gamma(
        nu, n, [alpha - nu + 1.0, alpha + beta + 1.0 + n], [alpha + 1.0 + n, alpha + beta + 2.0 - nu + n]
    )
    return _exact(2.0 ** (-nu) * (alpha + beta + 2 * n + 1.0) * ratio)


def _gegen_1mx(req: CoeffRequest) -> EvalResult:
    n = req.n
    mu, nu = req.p("mu"), req.p("nu")
    _require_positive(mu - nu + 0.5, "mu-nu+1/2", req)
    ratio = _poch_gamma(nu, n, [mu - nu + 0.5, mu], [2.0 * mu + 1.0 - nu + n])
    return _exact(2.0 ** (2.0 * mu - nu) / _SQRT_PI * (mu + n) * ratio)


def _cheby_1mx(req: CoeffRequest) -> EvalResult:
    n = req.n
    nu = req.p("nu")
    _require_positive(0.5 - nu, "1/2-nu", req)
    ratio = _poch_gamma(nu, n, [0.5 - nu], [1.0 - nu + n])
    return _exact(neumann(n) * ratio / (_SQRT_PI * 2.0**nu))


def _laguerre_1mx(req: CoeffRequest) -> EvalResult:
    n = req.n
    alpha, nu = req.p("alpha"), req.p("nu")
    _require_positive(alpha + 1.0 - nu, "alpha+1-nu", req)
    return _exact(_poch_gamma(nu, n, [alpha + 1.0 - nu], [alpha + 1.0 + n]))


_COEFFICIENTS: dict[IdentityId, Callable[[CoeffRequest], EvalResult]] = {
    IdentityId.AW_ROGERS: _aw_rogers,
    IdentityId.CQJACOBI_ROGERS: _cqjacobi_rogers,
    IdentityId.ROGERS_GAMMA: _rogers_gamma,
    IdentityId.CQHERMITE: _cqhermite,
    IdentityId.CHEBYSHEV_Q: _chebyshev_q,
    IdentityId.CQLEGENDRE: _cqlegendre,
    IdentityId.WILSON_LIMIT: _wilson_limit,
    IdentityId.GEGEN_GF_GENERAL: _gegen_gf_general,
    IdentityId.JACOBI_POW: _jacobi_pow,
    IdentityId.GEGEN_POW: _gegen_pow,
    IdentityId.CHEBY_POW: _cheby_pow,
    IdentityId.LEGENDRE_POW: _legendre_pow,
    IdentityId.HEINE: _heine,
    IdentityId.HEINE_SQRT: _heine_sqrt,
    IdentityId.JACOBI_1MX: _jacobi_1mx,
    IdentityId.GEGEN_1MX: _gegen_1mx,
    IdentityId.CHEBY_1MX: _cheby_1mx,
    IdentityId.LAGUERRE_1MX: _laguerre_1mx,
    IdentityId.ROGERS_GF: _rogers_gf,
    IdentityId.GEGEN_GF: _gegen_gf,
    IdentityId.CQHERMITE_GF: _cqhermite_gf,
    IdentityId.GEGEN_GAMMA: _gegen_gamma,
}


def coefficient(req: CoeffRequest) -> EvalResult:
    """The scalar multiplying the ``n``-th target polynomial of ``req.id``."""

    return _COEFFICIENTS[req.id](req)


def coefficients(
    identity: IdentityId | str,
    params: Params,
    n_terms: int,
    q: QBase | complex | None = None,
    pol: TruncationPolicy | None = None,
    *,
    vwp_rewrite: bool = False,
) -> list[EvalResult]:
    """Coefficients ``0..n_terms-1`` of one identity at one parameter point."""

    identity = IdentityId(identity)
    policy = pol if pol is not None else TruncationPolicy.from_settings()
    base = QBase.of(q) if q is not None else None
    return [
        coefficient(CoeffRequest(identity, n, params, base, policy, vwp_rewrite))
        for n in range(n_terms)
    ]


def connection_coeff(n: int, k: int, beta: complex, gamma: complex, q: QBase | complex) -> complex:
    """Coefficient of ``C_{n-2k}(x;gamma|q)`` in ``C_n(x;beta|q)``."""

    if n < 0 or not 0 <= k <= n // 2:
        raise DomainViolation(f"connection_coeff needs 0 <= k <= n/2, got n={n}, k={k}")
    qv = QBase.of(q).q
    beta, gamma = complex(beta), complex(gamma)
    denominator = (1.0 - gamma) * qpoch_finite(qv, qv, k) * qpoch_finite(qv * gamma, qv, n - k)
    if abs(denominator) == 0:
        raise DenominatorPole(f"connection coefficient denominator vanishes (n={n}, k={k})")
    # gamma^k (beta/gamma;q)_k written without dividing by gamma
    scaled = complex(np.prod(gamma - beta * qv ** np.arange(k))) if k else 1.0 + 0.0j
    numerator = (1.0 - gamma * qv ** (n - 2 * k)) * scaled * qpoch_finite(beta, qv, n - k)
    return numerator / denominator


def target_spec(identity: IdentityId | str, params: Params, q: QBase | complex | None = None) -> PolySpec:
    """The polynomial family instance an identity expands over."""

    descriptor = IDENTITY_CATALOG[IdentityId(identity)]
    family_params = tuple(complex(params[name]) for name in descriptor.family_params)
    base = QBase.of(q) if q is not None and descriptor.q_required else None
    return PolySpec(descriptor.family, family_params, base)


def _power(base: ComplexArray, exponent: complex, label: str) -> ComplexArray:
    if np.any((base.imag == 0) & (base.real <= 0)) and not float(exponent.real).is_integer():
        raise BranchDomain(f"{label} meets the branch cut of its power")
    return np.exp(-exponent * np.log(base))


def lhs_values(
    identity: IdentityId | str,
    params: Params,
    x: ArrayLike,
    q: QBase | complex | None = None,
    pol: TruncationPolicy | None = None,
) -> ComplexArray:
    """Left-hand side of an identity at every point of ``x``.

    ``x`` is the polynomial variable (the Wilson variable for ``wilson_limit``);
    ``z``-type identities read ``z`` from ``params``.
    """

    identity = IdentityId(identity)
    p = {name: complex(value) for name, value in params.items()}
    xx = np.asarray(x, dtype=np.complex128)
    if identity in (
        IdentityId.AW_ROGERS, IdentityId.CQJACOBI_ROGERS, IdentityId.ROGERS_GAMMA,
        IdentityId.CQHERMITE, IdentityId.CHEBYSHEV_Q, IdentityId.CQLEGENDRE,
        IdentityId.ROGERS_GF, IdentityId.CQHERMITE_GF,
    ):
        if q is None:
            raise DomainViolation(f"{identity.value} requires a base q")
        t = p["t"]
        w = unit_exponential(xx)
        bottom = qpoch_infinite_values(t * w, q, pol) * qpoch_infinite_values(t / w, q, pol)
        if identity is IdentityId.CQHERMITE_GF:
            return 1.0 / bottom
        beta = p["beta"]
        top = qpoch_infinite_values(t * beta * w, q, pol) * qpoch_infinite_values(t * beta / w, q, pol)
        return top / bottom
    if identity in (IdentityId.GEGEN_GF, IdentityId.GEGEN_GF_GENERAL, IdentityId.GEGEN_GAMMA):
        t = p["t"]
        exponent = {IdentityId.GEGEN_GF: "mu", IdentityId.GEGEN_GF_GENERAL: "beta"}.get(identity, "lambda")
        return _power(1.0 + t * t - 2.0 * t * xx, p[exponent], identity.value)
    if identity in (IdentityId.JACOBI_POW, IdentityId.GEGEN_POW, IdentityId.CHEBY_POW, IdentityId.LEGENDRE_POW):
        return _power(p["z"] - xx, p["nu"], identity.value)
    if identity is IdentityId.HEINE:
        return 1.0 / (p["z"] - xx)
    if identity is IdentityId.HEINE_SQRT:
        return _power(p["z"] - xx, 0.5 + 0.0j, identity.value)
    if identity in (IdentityId.JACOBI_1MX, IdentityId.GEGEN_1MX, IdentityId.CHEBY_1MX):
        return _power(1.0 - xx, p["nu"], identity.value)
    if identity is IdentityId.LAGUERRE_1MX:
        return _power(xx, p["nu"], identity.value)
    # wilson_limit: Gamma(t +- ix) / Gamma(u +- ix)
    t, u = p["t"], p["u"]
    logs = (
        log_gamma_values(t + 1j * xx) + log_gamma_values(t - 1j * xx)
        - log_gamma_values(u + 1j * xx) - log_gamma_values(u - 1j * xx)
    )
    return np.exp(logs).reshape(xx.shape)


def lhs_eval(
    identity: IdentityId | str,
    params: Params,
    x: complex,
    q: QBase | complex | None = None,
    pol: TruncationPolicy | None = None,
) -> EvalResult:
    """Left-hand side of an identity at a single point."""

    value = complex(lhs_values(identity, params, np.asarray([x]), q, pol)[0])
    return EvalResult(value, 0, True, 0.0)


# Identities whose LHS is sum_k t^k G_k(x) for a degree-k polynomial G_k
_ROGERS_GF_LHS = frozenset(
    {
        IdentityId.AW_ROGERS, IdentityId.CQJACOBI_ROGERS, IdentityId.ROGERS_GAMMA,
        IdentityId.CQHERMITE, IdentityId.CHEBYSHEV_Q, IdentityId.CQLEGENDRE,
        IdentityId.ROGERS_GF, IdentityId.CQHERMITE_GF,
    }
)
_GEGENBAUER_GF_EXPONENT = {
    IdentityId.GEGEN_GF: "mu",
    IdentityId.GEGEN_GF_GENERAL: "beta",
    IdentityId.GEGEN_GAMMA: "lambda",
}
TAIL_IDENTITIES = _ROGERS_GF_LHS | frozenset(_GEGENBAUER_GF_EXPONENT)

_TAIL_GUARD_TERMS = 16


def lhs_tail_values(
    identity: IdentityId | str,
    params: Params,
    x: ArrayLike,
    n: int,
    q: QBase | complex | None = None,
    pol: TruncationPolicy | None = None,
) -> ComplexArray:
    """``sum_{k >= n} t^k G_k(x)`` for an LHS that is the generating function of ``G_k``.

    ``G_k`` is ``C_k(x;beta|q)`` for the Rogers generating function and the
    Gegenbauer polynomial for ``(1 - 2xt + t^2)^-lambda``. The dropped terms have
    degree below ``n``, so every inner product with ``P_m``, ``m >= n``, is unchanged.
    """

    identity = IdentityId(identity)
    if identity not in TAIL_IDENTITIES:
        raise DomainViolation(f"{identity.value} is not a generating function in t")
    if n < 0:
        raise DomainViolation(f"tail index must be nonnegative, got {n}")
    policy = pol if pol is not None else TruncationPolicy.from_settings()
    p = {name: complex(value) for name, value in params.items()}
    t = p["t"]
    if not abs(t) < 1.0:
        raise DomainViolation(f"{identity.value} needs |t| < 1, got {t}")
    xx = np.asarray(x, dtype=np.complex128)
    if identity in _ROGERS_GF_LHS:
        if q is None:
            raise DomainViolation(f"{identity.value} requires a base q")
        beta = 0.0 if identity is IdentityId.CQHERMITE_GF else p["beta"]
        spec = PolySpec(PolyFamily.CQ_ULTRASPHERICAL, (beta,), QBase.of(q))
    else:
        spec = PolySpec(PolyFamily.GEGENBAUER, (p[_GEGENBAUER_GF_EXPONENT[identity]],))
    extra = 0 if t == 0 else math.ceil(math.log(policy.term_eps) / math.log(abs(t)))
    last = n + extra + _TAIL_GUARD_TERMS
    if last > policy.max_terms:
        raise NonConvergent(f"{identity.value} tail needs {last} terms, above max_terms={policy.max_terms}")
    powers = t ** np.arange(n, last + 1)
    return np.tensordot(powers, poly_sequence(spec, last, xx)[n:], axes=1)


def expansion_partial_sums(
    identity: IdentityId | str,
    params: Params,
    x: ArrayLike,
    n_terms: int,
    q: QBase | complex | None = None,
    pol: TruncationPolicy | None = None,
    *,
    vwp_rewrite: bool = False,
) -> tuple[ComplexArray, bool]:
    """Partial sums ``sum_{n < N} coefficient_n P_n(x)`` for every ``N <= n_terms``.

    Returns an array of shape ``(n_terms, *x.shape)`` and whether every
    coefficient converged.
    """

    identity = IdentityId(identity)
    xx = np.asarray(x, dtype=np.complex128)
    coeffs = coefficients(identity, params, n_terms, q, pol, vwp_rewrite=vwp_rewrite)
    values = np.array([c.value for c in coeffs])
    polys = poly_sequence(target_spec(identity, params, q), n_terms - 1, xx)
    terms = values.reshape((n_terms,) + (1,) * xx.ndim) * polys
    logger.debug("[expansions] %s summed %d terms", identity.value, n_terms)
    return np.cumsum(terms, axis=0), all(c.converged for c in coeffs)


__all__ = [
    "neumann",
    "coefficient",
    "coefficients",
    "connection_coeff",
    "target_spec",
    "lhs_values",
    "lhs_eval",
    "TAIL_IDENTITIES",
    "lhs_tail_values",
    "expansion_partial_sums",
]
