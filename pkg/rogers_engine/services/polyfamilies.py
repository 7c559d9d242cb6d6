"""Orthogonal polynomial families and second-kind functions.

Every family has two evaluation paths: its terminating hypergeometric definition
(``method="series"``) and its three-term recurrence (``method="recurrence"``).
``method="auto"`` sums the definition, measures the cancellation ratio
``sum|term| / |sum|`` and falls back to the recurrence where the ratio exceeds
``QSK_SERIES_COND_LIMIT``.

Trigonometric-argument families map ``x`` to ``e^{i theta} = x + sqrt(x^2 - 1)``
on the branch with ``|e^{i theta}| >= 1``; on ``[-1, 1]`` this is ``e^{i arccos x}``.
The Wilson family is evaluated at its real variable ``x`` (the polynomial is in ``x^2``).
"""

from __future__ import annotations

import cmath
import math
from typing import Literal

import numpy as np
from numpy.typing import ArrayLike, NDArray

from rogers_engine.core.config import settings
from rogers_engine.core.exceptions import (
    BranchDomain,
    DenominatorPole,
    DomainViolation,
    IntegerAlphaUnsupported,
    ParameterDomain,
)
from rogers_engine.core.identities import PolyFamily
from rogers_engine.core.logging import get_logger
from rogers_engine.core.models import HypSpec, PolySpec, QBase
from rogers_engine.services.hyperseries import (
    hyp,
    hyp_terminating_values,
    phi_terminating_values,
)
from rogers_engine.services.qcore import (
    gamma_ratio,
    is_integer,
    log_gamma_complex,
    qpoch_finite,
    qpow,
)

logger = get_logger(__name__)

ComplexArray = NDArray[np.complex128]
Method = Literal["auto", "series", "recurrence"]


def unit_exponential(x: ArrayLike) -> ComplexArray:
    """Map ``x`` to ``e^{i theta}`` with ``x = cos theta`` and ``|e^{i theta}| >= 1``."""

    xx = np.asarray(x, dtype=np.complex128)
    root = np.sqrt(xx * xx - 1.0)
    w = xx + root
    w = np.where(np.abs(w) < 1.0, xx - root, w)
    on_interval = (xx.imag == 0) & (np.abs(xx.real) <= 1.0)
    circle = xx.real + 1j * np.sqrt(np.clip(1.0 - xx.real**2, 0.0, None))
    return np.where(on_interval, circle, w)


def askey_wilson_map(alpha: complex, gamma: complex, q: complex) -> tuple[complex, ...]:
    """Askey-Wilson parameters of the continuous q-Jacobi family in rescaled notation."""

    return (
        cmath.sqrt(alpha),
        -cmath.sqrt(gamma),
        -cmath.sqrt(q * gamma),
        cmath.sqrt(q * alpha),
    )


def _ordered_aw(params: tuple[complex, ...]) -> tuple[complex, ...]:
    """Put the largest-modulus parameter first; the polynomial is symmetric in them."""

    lead = max(range(4), key=lambda i: abs(params[i]))
    rest = tuple(p for i, p in enumerate(params) if i != lead)
    if params[lead] == 0:
        raise ParameterDomain("Askey-Wilson polynomials need a nonzero parameter")
    return (params[lead], *rest)


def _cq_jacobi_scale(spec: PolySpec, n: int) -> complex:
    """Factor turning ``p_n`` at the mapped parameters into ``P_n^{(alpha,gamma)}(x|q)``."""

    alpha, gamma = spec.param("alpha"), spec.param("gamma")
    q = spec.qv
    a, c, d, _ = askey_wilson_map(alpha, gamma, q)
    ac, ad = a * c, a * d
    denominator = qpoch_finite(q, q, n) * qpoch_finite(ac, q, n) * qpoch_finite(ad, q, n)
    if denominator == 0:
        raise ParameterDomain("continuous q-Jacobi normalisation vanishes")
    return cmath.sqrt(alpha) ** n / denominator


# ---------------------------------------------------------------------------
# Definition (series) paths
# ---------------------------------------------------------------------------


def _aw_series(params: tuple[complex, ...], q: complex, n: int, w: ComplexArray):
    a, b, c, d = _ordered_aw(params)
    scale = a ** (-n) * qpoch_finite(a * b, q, n) * qpoch_finite(a * c, q, n) * qpoch_finite(a * d, q, n)
    total, magnitude = phi_terminating_values(
        [q ** (-n), a * b * c * d * q ** (n - 1), a * w, a / w],
        [a * b, a * c, a * d],
        q,
        q,
        n,
    )
    return scale * total, abs(scale) * magnitude


def _theta_sum(coefficients: ComplexArray, w: ComplexArray, n: int):
    """``sum_k c_k w^{n-2k}`` and the matching sum of absolute terms."""

    powers = np.stack([w ** (n - 2 * k) for k in range(n + 1)])
    shaped = coefficients.reshape((n + 1,) + (1,) * w.ndim)
    terms = shaped * powers
    return terms.sum(axis=0), np.abs(terms).sum(axis=0)


def _qpoch_table(a: complex, q: complex, n: int) -> ComplexArray:
    """``(a;q)_k`` for k = 0..n."""

    factors = 1.0 - a * q ** np.arange(n)
    return np.concatenate([[1.0 + 0.0j], np.cumprod(factors)])


def _cq_ultra_series(beta: complex, q: complex, n: int, w: ComplexArray):
    beta_table = _qpoch_table(beta, q, n)
    q_table = _qpoch_table(q, q, n)
    k = np.arange(n + 1)
    coefficients = beta_table[k] * beta_table[n - k] / (q_table[k] * q_table[n - k])
    return _theta_sum(coefficients, w, n)


def _cq_hermite_series(q: complex, n: int, w: ComplexArray):
    q_table = _qpoch_table(q, q, n)
    k = np.arange(n + 1)
    coefficients = q_table[n] / (q_table[k] * q_table[n - k])
    return _theta_sum(coefficients, w, n)


def _rising(a: complex, n: int) -> complex:
    return complex(np.prod(a + np.arange(n))) if n else 1.0 + 0.0j


def _classical_series(spec: PolySpec, n: int, xx: ComplexArray):
    family = spec.family
    y = (1.0 - xx) / 2.0
    if family is PolyFamily.JACOBI:
        alpha, beta = spec.params
        scale = _rising(alpha + 1.0, n) / math.factorial(n)
        total, mag = hyp_terminating_values([-n, n + alpha + beta + 1.0], [alpha + 1.0], y, n)
    elif family is PolyFamily.GEGENBAUER:
        (mu,) = spec.params
        scale = _rising(2.0 * mu, n) / math.factorial(n)
        total, mag = hyp_terminating_values([-n, n + 2.0 * mu], [mu + 0.5], y, n)
    elif family is PolyFamily.CHEBYSHEV_T:
        scale = 1.0 + 0.0j
        total, mag = hyp_terminating_values([-n, n], [0.5], y, n)
    elif family is PolyFamily.LEGENDRE:
        scale = 1.0 + 0.0j
        total, mag = hyp_terminating_values([-n, n + 1.0], [1.0], y, n)
    else:
        (alpha,) = spec.params
        scale = _rising(alpha + 1.0, n) / math.factorial(n)
        total, mag = hyp_terminating_values([-n], [alpha + 1.0], xx, n)
    return scale * total, abs(scale) * mag


def _wilson_series(params: tuple[complex, ...], n: int, x: ComplexArray):
    a, b, c, d = params
    scale = _rising(a + b, n) * _rising(a + c, n) * _rising(a + d, n)
    total, magnitude = hyp_terminating_values(
        [-n, n + a + b + c + d - 1.0, a + 1j * x, a - 1j * x],
        [a + b, a + c, a + d],
        1.0,
        n,
    )
    return scale * total, abs(scale) * magnitude


def _series(spec: PolySpec, n: int, xx: ComplexArray) -> tuple[ComplexArray, NDArray[np.float64]]:
    family = spec.family
    try:
        if family is PolyFamily.ASKEY_WILSON:
            return _aw_series(spec.params, spec.qv, n, unit_exponential(xx))
        if family is PolyFamily.CQ_JACOBI:
            q = spec.qv
            mapped = askey_wilson_map(*spec.params, q)
            total, mag = _aw_series(mapped, q, n, unit_exponential(xx))
            scale = _cq_jacobi_scale(spec, n)
            return scale * total, abs(scale) * mag
        if family is PolyFamily.CQ_ULTRASPHERICAL:
            return _cq_ultra_series(spec.params[0], spec.qv, n, unit_exponential(xx))
        if family is PolyFamily.CQ_HERMITE:
            return _cq_hermite_series(spec.qv, n, unit_exponential(xx))
        if family is PolyFamily.CQ_LEGENDRE:
            q = spec.qv
            total, mag = _cq_ultra_series(qpow(q, 0.5), q, n, unit_exponential(xx))
            scale = qpow(q, n / 4.0)
            return scale * total, abs(scale) * mag
        if family is PolyFamily.WILSON:
            return _wilson_series(spec.params, n, xx)
        return _classical_series(spec, n, xx)
    except DenominatorPole as exc:
        raise ParameterDomain(f"{family.value} definition has a vanishing denominator: {exc}") from exc


# ---------------------------------------------------------------------------
# Recurrence paths
# ---------------------------------------------------------------------------


def _checked(value: complex, family: PolyFamily, n: int) -> complex:
    if value == 0:
        raise ParameterDomain(f"{family.value} recurrence degenerates at n={n}")
    return value


def _aw_sequence(params: tuple[complex, ...], q: complex, n_max: int, w: ComplexArray) -> ComplexArray:
    a, b, c, d = _ordered_aw(params)
    abcd = a * b * c * d
    two_x = w + 1.0 / w
    out = np.empty((n_max + 1,) + w.shape, dtype=np.complex128)
    out[0] = 1.0
    previous = np.zeros_like(w)
    current = np.ones_like(w)
    for n in range(n_max):
        qn = q**n
        big_a = (
            (1 - a * b * qn) * (1 - a * c * qn) * (1 - a * d * qn) * (1 - abcd * qn / q)
            / (a * (1 - abcd * qn * qn / q) * (1 - abcd * qn * qn))
        )
        big_c = (
            a * (1 - qn) * (1 - b * c * qn / q) * (1 - b * d * qn / q) * (1 - c * d * qn / q)
            / ((1 - abcd * qn * qn / (q * q)) * (1 - abcd * qn * qn / q))
            if n
            else 0.0
        )
        _checked(big_a, PolyFamily.ASKEY_WILSON, n)
        following = ((two_x - (a + 1.0 / a - big_a - big_c)) * current - big_c * previous) / big_a
        previous, current = current, following
        out[n + 1] = current
    scale = np.array(
        [
            a ** (-k) * qpoch_finite(a * b, q, k) * qpoch_finite(a * c, q, k) * qpoch_finite(a * d, q, k)
            for k in range(n_max + 1)
        ]
    )
    return out * scale.reshape((n_max + 1,) + (1,) * w.ndim)


def _wilson_sequence(params: tuple[complex, ...], n_max: int, x: ComplexArray) -> ComplexArray:
    a, b, c, d = params
    s = a + b + c + d
    out = np.empty((n_max + 1,) + x.shape, dtype=np.complex128)
    out[0] = 1.0
    previous = np.zeros_like(x)
    current = np.ones_like(x)
    shift = a * a + x * x
    for n in range(n_max):
        big_a = (n + s - 1) * (n + a + b) * (n + a + c) * (n + a + d) / ((2 * n + s - 1) * (2 * n + s))
        big_c = (
            n * (n + b + c - 1) * (n + b + d - 1) * (n + c + d - 1) / ((2 * n + s - 2) * (2 * n + s - 1))
            if n
            else 0.0
        )
        _checked(big_a, PolyFamily.WILSON, n)
        following = ((big_a + big_c - shift) * current - big_c * previous) / big_a
        previous, current = current, following
        out[n + 1] = current
    scale = np.array([_rising(a + b, k) * _rising(a + c, k) * _rising(a + d, k) for k in range(n_max + 1)])
    return out * scale.reshape((n_max + 1,) + (1,) * x.ndim)


def _recurrence_step(spec: PolySpec, n: int, xx: ComplexArray, current, previous):
    """Return P_{n+1} from P_n and P_{n-1} for the single-parameter families."""

    family = spec.family
    if family is PolyFamily.CQ_ULTRASPHERICAL or family is PolyFamily.CQ_LEGENDRE:
        q = spec.qv
        beta = spec.params[0] if family is PolyFamily.CQ_ULTRASPHERICAL else qpow(q, 0.5)
        lead = _checked(1 - q ** (n + 1), family, n)
        back = (1 - beta * beta * q ** (n - 1)) if n else 0.0
        return (2 * xx * (1 - beta * q**n) * current - back * previous) / lead
    if family is PolyFamily.CQ_HERMITE:
        q = spec.qv
        return 2 * xx * current - (1 - q**n) * previous
    if family is PolyFamily.JACOBI:
        alpha, beta = spec.params
        if n == 0:
            return (alpha + 1) + (alpha + beta + 2) * (xx - 1) / 2
        s = 2 * n + alpha + beta
        lead = _checked(2 * (n + 1) * (n + alpha + beta + 1) * s, family, n)
        return ((s + 1) * (s * (s + 2) * xx + alpha * alpha - beta * beta) * current
                - 2 * (n + alpha) * (n + beta) * (s + 2) * previous) / lead
    if family is PolyFamily.GEGENBAUER:
        (mu,) = spec.params
        return (2 * (n + mu) * xx * current - (n + 2 * mu - 1) * previous) / (n + 1)
    if family is PolyFamily.CHEBYSHEV_T:
        return xx * current if n == 0 else 2 * xx * current - previous
    if family is PolyFamily.LEGENDRE:
        return ((2 * n + 1) * xx * current - n * previous) / (n + 1)
    (alpha,) = spec.params
    return ((2 * n + alpha + 1 - xx) * current - (n + alpha) * previous) / (n + 1)


def poly_sequence(spec: PolySpec, n_max: int, x: ArrayLike) -> ComplexArray:
    """All degrees ``0..n_max`` from one recurrence pass; shape ``(n_max+1, *x.shape)``."""

    if n_max < 0:
        raise DomainViolation(f"degree must be nonnegative, got {n_max}")
    xx = np.asarray(x, dtype=np.complex128)
    family = spec.family
    if family is PolyFamily.ASKEY_WILSON:
        return _aw_sequence(spec.params, spec.qv, n_max, unit_exponential(xx))
    if family is PolyFamily.CQ_JACOBI:
        q = spec.qv
        raw = _aw_sequence(askey_wilson_map(*spec.params, q), q, n_max, unit_exponential(xx))
        scale = np.array([_cq_jacobi_scale(spec, k) for k in range(n_max + 1)])
        return raw * scale.reshape((n_max + 1,) + (1,) * xx.ndim)
    if family is PolyFamily.WILSON:
        return _wilson_sequence(spec.params, n_max, xx)

    out = np.empty((n_max + 1,) + xx.shape, dtype=np.complex128)
    out[0] = 1.0
    previous = np.zeros_like(xx)
    current = np.ones_like(xx)
    for n in range(n_max):
        previous, current = current, _recurrence_step(spec, n, xx, current, previous)
        out[n + 1] = current
    if family is PolyFamily.CQ_LEGENDRE:
        scale = np.array([qpow(spec.qv, k / 4.0) for k in range(n_max + 1)])
        out = out * scale.reshape((n_max + 1,) + (1,) * xx.ndim)
    return out


def poly_values(
    spec: PolySpec,
    n: int,
    x: ArrayLike,
    method: Method = "auto",
    cond_limit: float | None = None,
) -> ComplexArray:
    """Degree-``n`` polynomial of ``spec`` at every point of ``x``."""

    if n < 0:
        raise DomainViolation(f"degree must be nonnegative, got {n}")
    xx = np.asarray(x, dtype=np.complex128)
    if n == 0:
        return np.ones_like(xx)
    if method == "recurrence":
        return poly_sequence(spec, n, xx)[n]
    total, magnitude = _series(spec, n, xx)
    if method == "series":
        return total
    limit = settings.QSK_SERIES_COND_LIMIT if cond_limit is None else cond_limit
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(np.abs(total) > 0, magnitude / np.abs(total), np.inf)
    if np.all(ratio <= limit):
        return total
    logger.debug(
        "[poly] %s n=%d: cancellation ratio %.3g, using recurrence",
        spec.family.value, n, float(np.max(ratio)),
    )
    return np.where(ratio <= limit, total, poly_sequence(spec, n, xx)[n])


def poly_eval(spec: PolySpec, n: int, x: complex, method: Method = "auto") -> complex:
    """Value of the degree-``n`` polynomial of ``spec`` at a single point."""

    return complex(poly_values(spec, n, np.asarray([x]), method)[0])


def poly_eval_recurrence(spec: PolySpec, n: int, x: complex) -> complex:
    """Degree-``n`` value from the three-term recurrence alone."""

    return complex(poly_sequence(spec, n, np.asarray([x]))[n][0])


def wilson_eval(n: int, x2: complex, a: tuple[complex, ...]) -> complex:
    """Wilson polynomial ``W_n(x^2; a)`` from its terminating 4F3."""

    params = tuple(complex(p) for p in a)
    if len(params) != 4:
        raise ParameterDomain(f"Wilson polynomials take four parameters, got {len(params)}")
    x = np.sqrt(np.asarray([complex(x2)]))
    total, _ = _wilson_series(params, n, x)
    return complex(total[0])


def legendre_q2(nu: complex, mu: complex, z: complex) -> complex:
    """Legendre function of the second kind ``Q_nu^mu(z)`` for ``|z| > 1``.

    Uses the 2F1 in ``1/z^2`` with principal ``(z^2-1)^{mu/2}`` and ``z^{nu+mu+1}``;
    the gamma prefactor is combined in log space.
    """

    nu, mu, z = complex(nu), complex(mu), complex(z)
    if z.imag == 0 and z.real <= 1.0:
        raise BranchDomain(f"Q_nu^mu is cut along (-inf, 1], got z={z}")
    if abs(z) <= 1.0:
        raise DomainViolation(f"legendre_q2 needs |z| > 1, got {z}")
    log_prefactor = (
        0.5 * math.log(math.pi)
        + 1j * math.pi * mu
        + log_gamma_complex(nu + mu + 1.0)
        - log_gamma_complex(nu + 1.5)
        + 0.5 * mu * cmath.log(z * z - 1.0)
        - (nu + 1.0) * math.log(2.0)
        - (nu + mu + 1.0) * cmath.log(z)
    )
    series = hyp(HypSpec(((nu + mu + 1.0) / 2.0, (nu + mu + 2.0) / 2.0), (nu + 1.5,), 1.0 / (z * z)))
    return cmath.exp(log_prefactor) * series.value


def jacobi_fn_first(gamma: complex, alpha: complex, beta: complex, z: complex) -> complex:
    """Jacobi function of the first kind ``P_gamma^{(alpha,beta)}(z)``."""

    gamma, alpha, beta, z = complex(gamma), complex(alpha), complex(beta), complex(z)
    prefactor = gamma_ratio([alpha + gamma + 1.0], [alpha + 1.0, gamma + 1.0])
    series = hyp(HypSpec((-gamma, alpha + beta + gamma + 1.0), (alpha + 1.0,), (1.0 - z) / 2.0))
    return prefactor * series.value


def jacobi_fn_second(gamma: complex, alpha: complex, beta: complex, z: complex) -> complex:
    """Jacobi function of the second kind from its csc(pi alpha) connection form.

    The two terms cancel for large ``gamma``; :func:`jacobi_fn_second_decaying`
    is the stable evaluation for expansions.
    """

    gamma, alpha, beta, z = complex(gamma), complex(alpha), complex(beta), complex(z)
    if is_integer(alpha):
        raise IntegerAlphaUnsupported(f"connection form is singular at integer alpha={alpha}")
    first = -0.5 * math.pi / cmath.sin(math.pi * alpha) * jacobi_fn_first(gamma, alpha, beta, z)
    log_prefactor = (
        (alpha + beta - 1.0) * math.log(2.0)
        + log_gamma_complex(alpha)
        + log_gamma_complex(beta + gamma + 1.0)
        - log_gamma_complex(alpha + beta + gamma + 1.0)
        - alpha * cmath.log(z - 1.0)
        - beta * cmath.log(z + 1.0)
    )
    series = hyp(HypSpec((gamma + 1.0, -alpha - beta - gamma), (1.0 - alpha,), (1.0 - z) / 2.0))
    return first + cmath.exp(log_prefactor) * series.value


def jacobi_fn_second_decaying(gamma: complex, alpha: complex, beta: complex, z: complex) -> complex:
    """Jacobi function of the second kind through the 2F1 in ``2/(1+z)``, for real ``z > 1``."""

    gamma, alpha, beta, z = complex(gamma), complex(alpha), complex(beta), complex(z)
    if z.imag != 0 or z.real <= 1.0:
        raise BranchDomain(f"jacobi_fn_second_decaying needs real z > 1, got {z}")
    c = 2.0 * gamma + alpha + beta + 2.0
    log_prefactor = (
        (gamma + alpha + beta) * math.log(2.0)
        + log_gamma_complex(gamma + alpha + 1.0)
        + log_gamma_complex(gamma + beta + 1.0)
        - log_gamma_complex(c)
        - alpha * cmath.log(z - 1.0)
        - (beta + gamma + 1.0) * cmath.log(z + 1.0)
    )
    series = hyp(HypSpec((gamma + 1.0, gamma + beta + 1.0), (c,), 2.0 / (1.0 + z)))
    return cmath.exp(log_prefactor) * series.value


def gamma_ratio_asymptote(a: complex, b: complex, tau: float, sign: int = 1) -> tuple[complex, complex]:
    """``Gamma(a + s i tau)/Gamma(b + s i tau)`` and its large-``tau`` asymptote.

    The lower sign carries the conjugate phase ``e^{-i pi (a-b)/2}``.
    """

    shift = sign * 1j * tau
    ratio = gamma_ratio([a + shift], [b + shift])
    asymptote = cmath.exp(sign * 0.5j * math.pi * (a - b)) * tau ** (a - b)
    return ratio, asymptote


def family_spec(family: PolyFamily | str, params: tuple[complex, ...] = (), q: complex | None = None) -> PolySpec:
    """Shorthand for building a :class:`PolySpec`."""

    return PolySpec(PolyFamily(family), params, QBase.of(q) if q is not None else None)


__all__ = [
    "Method",
    "unit_exponential",
    "askey_wilson_map",
    "poly_sequence",
    "poly_values",
    "poly_eval",
    "poly_eval_recurrence",
    "wilson_eval",
    "legendre_q2",
    "jacobi_fn_first",
    "jacobi_fn_second",
    "jacobi_fn_second_decaying",
    "gamma_ratio_asymptote",
    "family_spec",
]
