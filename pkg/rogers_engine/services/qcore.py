"""q-shifted factorials, q-gamma, complex gamma and Pochhammer symbols.

Every function here is pure. Infinite products are truncated at the first
index ``N`` with ``|a||q|^N < product_eps`` and report a geometric tail bound.
Scalar entry points accept plain numbers or :class:`QBase` instances for ``q``;
the ``*_values`` variants evaluate many parameters at once with numpy.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy.special import loggamma

from rogers_engine.core.exceptions import (
    DivisionByVanishingProduct,
    DomainViolation,
    PoleError,
)
from rogers_engine.core.logging import get_logger
from rogers_engine.core.models import EvalResult, QBase, TruncationPolicy

logger = get_logger(__name__)

QLike = QBase | complex | float
ComplexArray = NDArray[np.complex128]

_CHUNK = 512

def _q(q: QLike) -> complex:
    return QBase.of(q).q


def _policy(pol: TruncationPolicy | None) -> TruncationPolicy:
    return pol if pol is not None else TruncationPolicy.from_settings()


def is_integer(value: complex, tol: float = 0.0) -> bool:
    """True when ``value`` is (within ``tol``) a real integer."""

    value = complex(value)
    return abs(value.imag) <= tol and abs(value.real - round(value.real)) <= tol


def is_nonpositive_integer(value: complex, tol: float = 0.0) -> bool:
    """True when ``value`` lies in -N0 (within ``tol``)."""

    return is_integer(value, tol) and round(complex(value).real) <= 0


def qpow(q: complex, z: complex) -> complex:
    """Principal ``q**z``."""

    if z == 0:
        return 1.0 + 0.0j
    if is_integer(z):
        return complex(q) ** int(round(complex(z).real))
    return cmath.exp(complex(z) * cmath.log(q))


def _truncation_index(amax: float, qabs: float, pol: TruncationPolicy) -> tuple[int, bool]:
    """First N with amax*|q|^N < product_eps, capped at max_terms."""

    if amax < pol.product_eps:
        return 0, True
    needed = math.ceil(math.log(pol.product_eps / amax) / math.log(qabs))
    needed = max(needed, 1)
    if needed > pol.max_terms:
        return pol.max_terms, False
    return needed, True


def qpoch_finite(a: complex, q: QLike, n: int) -> complex:
    """Return ``(a;q)_n``, the exact product of ``n`` factors."""

    if n < 0:
        raise DomainViolation(f"qpoch_finite needs n >= 0, got {n}")
    if n == 0:
        return 1.0 + 0.0j
    qv = _q(q)
    factors = 1.0 - complex(a) * qv ** np.arange(n)
    return complex(np.prod(factors))


def qpoch_finite_many(params: Iterable[complex], q: QLike, n: int) -> complex:
    """Return ``(a_1, ..., a_k; q)_n``."""

    result = 1.0 + 0.0j
    for a in params:
        result *= qpoch_finite(a, q, n)
    return result


def qpoch_infinite(a: complex, q: QLike, pol: TruncationPolicy | None = None) -> EvalResult:
    """Return ``(a;q)_inf`` truncated by ``pol.product_eps``."""

    pol = _policy(pol)
    qv = _q(q)
    a = complex(a)
    qabs = abs(qv)
    n_terms, converged = _truncation_index(abs(a), qabs, pol)
    if not converged:
        logger.warning("[qcore] (a;q)_inf hit max_terms=%d at |q|=%s", pol.max_terms, qabs)
    value = qpoch_finite(a, qv, n_terms)
    rest = abs(a) * qabs**n_terms
    tail = abs(value) * rest / ((1.0 - qabs) * max(1.0 - rest, 1e-300)) if rest else 0.0
    return EvalResult(value, n_terms, converged, tail)


def qpoch_infinite_many(
    params: Iterable[complex], q: QLike, pol: TruncationPolicy | None = None
) -> EvalResult:
    """Return ``(a_1, ..., a_k; q)_inf`` with summed tail bounds."""

    value = 1.0 + 0.0j
    terms = 0
    converged = True
    tail = 0.0
    for a in params:
        part = qpoch_infinite(a, q, pol)
        tail = tail * abs(part.value) + part.tail_bound * abs(value)
        value *= part.value
        terms = max(terms, part.terms_used)
        converged = converged and part.converged
    return EvalResult(value, terms, converged, tail)


def qpoch_infinite_values(
    a: ArrayLike, q: QLike, pol: TruncationPolicy | None = None
) -> ComplexArray:
    """Vectorised ``(a;q)_inf`` over an array of ``a`` values."""

    pol = _policy(pol)
    qv = _q(q)
    arr = np.asarray(a, dtype=np.complex128)
    amax = float(np.max(np.abs(arr))) if arr.size else 0.0
    n_terms, _ = _truncation_index(amax, abs(qv), pol)
    out = np.ones_like(arr)
    for start in range(0, n_terms, _CHUNK):
        powers = qv ** np.arange(start, min(start + _CHUNK, n_terms))
        out = out * np.prod(1.0 - arr[..., None] * powers, axis=-1)
    return out


def qpoch_general(
    a: complex, q: QLike, beta: complex, pol: TruncationPolicy | None = None
) -> EvalResult:
    """Return ``(a;q)_beta = (a;q)_inf / (a q^beta;q)_inf`` for arbitrary ``beta``.

    Integer exponents use the finite product (``beta >= 0``) or the reciprocal
    rule ``1/(a q^beta;q)_{-beta}``. Other exponents multiply the factor ratios
    ``(1 - a q^k)/(1 - a q^{beta+k})`` directly so that neither infinite product
    is formed on its own.
    """

    pol = _policy(pol)
    qv = _q(q)
    a = complex(a)
    beta = complex(beta)
    if is_integer(beta):
        n = int(round(beta.real))
        if n >= 0:
            return EvalResult(qpoch_finite(a, qv, n), n, True, 0.0)
        denominator = qpoch_finite(a * qv**n, qv, -n)
        if abs(denominator) <= pol.abs_floor:
            raise DivisionByVanishingProduct(
                f"(a q^beta;q)_-beta vanishes for a={a}, beta={n}"
            )
        return EvalResult(1.0 / denominator, -n, True, 0.0)

    b = a * qpow(qv, beta)
    spread = abs(b - a)
    qabs = abs(qv)
    n_terms, converged = _truncation_index(spread, qabs, pol)
    n_terms = max(n_terms, 1)
    value = 1.0 + 0.0j
    for start in range(0, n_terms, _CHUNK * 8):
        powers = qv ** np.arange(start, min(start + _CHUNK * 8, n_terms))
        den = 1.0 - b * powers
        if np.any(np.abs(den) <= pol.abs_floor):
            raise DivisionByVanishingProduct(f"(a q^beta;q)_inf vanishes for a={a}, beta={beta}")
        value *= complex(np.prod((1.0 - a * powers) / den))
    rest = spread * qabs**n_terms
    tail = abs(value) * rest / (1.0 - qabs)
    return EvalResult(value, n_terms, converged, tail)


def qnumber(z: complex, q: QLike) -> complex:
    """Return the q-number ``[z]_q = (1 - q^z)/(1 - q)``."""

    qv = _q(q)
    return (1.0 - qpow(qv, z)) / (1.0 - qv)


def qfactorial(n: int, q: QLike) -> complex:
    """Return ``[n]_q! = [1]_q [2]_q ... [n]_q``."""

    if n < 0:
        raise DomainViolation(f"qfactorial needs n >= 0, got {n}")
    result = 1.0 + 0.0j
    for k in range(1, n + 1):
        result *= qnumber(k, q)
    return result


def qgamma(x: complex, q: QLike, pol: TruncationPolicy | None = None) -> EvalResult:
    """Return ``Gamma_q(x) = (1-q)^{1-x} (q;q)_inf / (q^x;q)_inf``."""

    qv = _q(q)
    x = complex(x)
    try:
        ratio = qpoch_general(qv, qv, x - 1.0, pol)
    except DivisionByVanishingProduct as exc:
        raise PoleError(f"Gamma_q has a pole at x={x}") from exc
    scale = qpow(1.0 - qv, 1.0 - x)
    return EvalResult(scale * ratio.value, ratio.terms_used, ratio.converged, abs(scale) * ratio.tail_bound)


def _check_poles(arr: ComplexArray) -> None:
    poles = (arr.imag == 0) & (arr.real <= 0) & (arr.real == np.round(arr.real))
    if np.any(poles):
        raise PoleError(f"gamma has a pole at {arr[poles][0]}")


def log_gamma_values(z: ArrayLike) -> ComplexArray:
    """Vectorised log-gamma; ``exp`` of the result is ``Gamma(z)``."""

    arr = np.atleast_1d(np.asarray(z, dtype=np.complex128))
    _check_poles(arr)
    return np.asarray(loggamma(arr), dtype=np.complex128)


def log_gamma_complex(z: complex) -> complex:
    """Principal branch of the complex log-gamma function."""

    return complex(log_gamma_values([z])[0])


def gamma_complex(z: complex) -> complex:
    """Complex gamma function, evaluated through its logarithm."""

    return cmath.exp(log_gamma_complex(z))


def gamma_values(z: ArrayLike) -> ComplexArray:
    """Vectorised complex gamma function."""

    return np.exp(log_gamma_values(z)).reshape(np.shape(z))


def gamma_ratio(num: Sequence[complex], den: Sequence[complex]) -> complex:
    """Return ``prod Gamma(num) / prod Gamma(den)`` in log space.

    A pole among ``den`` makes the ratio zero; a pole among ``num`` raises.
    """

    if any(is_nonpositive_integer(d) for d in den):
        if any(is_nonpositive_integer(n) for n in num):
            raise PoleError("gamma ratio with poles in numerator and denominator")
        return 0.0j
    log_value = 0.0j
    if num:
        log_value += complex(np.sum(log_gamma_values(list(num))))
    if den:
        log_value -= complex(np.sum(log_gamma_values(list(den))))
    return cmath.exp(log_value)


def rising_factorial(a: complex, n: int) -> complex:
    """Return ``(a)_n`` for integer ``n >= 0``, exact zeros included."""

    a = complex(a)
    if n < 0:
        raise DomainViolation(f"rising_factorial needs n >= 0, got {n}")
    if is_nonpositive_integer(a) and n > -round(a.real):
        return 0.0j
    if n <= 64 or is_nonpositive_integer(a):
        return complex(np.prod(a + np.arange(n))) if n else 1.0 + 0.0j
    return gamma_ratio([a + n], [a])


def pochhammer_general(alpha: complex, beta: complex) -> complex:
    """Return ``(alpha)_beta`` with the reciprocal rule for ``Re beta < 0``."""

    alpha = complex(alpha)
    beta = complex(beta)
    if is_integer(beta) and beta.real >= 0:
        return rising_factorial(alpha, int(round(beta.real)))
    if beta.real < 0:
        inner = pochhammer_general(alpha + beta, -beta)
        if inner == 0:
            raise PoleError(f"(alpha)_beta is infinite at alpha={alpha}, beta={beta}")
        return 1.0 / inner
    if is_nonpositive_integer(alpha):
        raise PoleError(f"Gamma(alpha) is infinite at alpha={alpha}")
    return gamma_ratio([alpha + beta], [alpha])


@dataclass(slots=True, frozen=True)
class InequalityViolation:
    """One sampled point where a q-Pochhammer inequality failed."""

    name: str
    point: dict[str, float]
    lhs: float
    rhs: float


def factorial_lower_bound(u: float, j: int, q: float) -> tuple[float, float]:
    """Sides of ``(q^u;q)_j/(1-q)^j >= [Re u]_q [j-1]_q!`` for ``j >= 1``."""

    lhs = abs(qpoch_finite(qpow(q, u), q, j)) / (1.0 - q) ** j
    rhs = abs(qnumber(complex(u).real, q) * qfactorial(j - 1, q))
    return lhs, rhs


def ratio_upper_bound(u: float, n: int, q: float) -> tuple[float, float]:
    """Sides of ``(q^u;q)_n/(q;q)_n <= [1+n]_q^u``."""

    lhs = abs(qpoch_finite(qpow(q, u), q, n) / qpoch_finite(q, q, n))
    rhs = abs(qpow(qnumber(1 + n, q), u))
    return lhs, rhs


def shifted_ratio_upper_bound(u: float, v: float, k: int, n: int, q: float) -> tuple[float, float]:
    """Sides of ``(q^{v+k};q)_n/(q^{u+k};q)_n <= [n+1]_q^{v+1}/[Re u]_q``."""

    lhs = abs(qpoch_finite(qpow(q, v + k), q, n) / qpoch_finite(qpow(q, u + k), q, n))
    rhs = abs(qpow(qnumber(n + 1, q), v + 1) / qnumber(complex(u).real, q))
    return lhs, rhs


def check_inequalities(
    q: float,
    *,
    index_max: int = 20,
    u_values: Sequence[float] = (0.1, 0.5, 1.0, 2.5, 5.0),
    v_values: Sequence[float] = (0.0, 0.5, 1.0, 2.5, 5.0),
    rel_tol: float = 1e-12,
) -> list[InequalityViolation]:
    """Sample the three q-Pochhammer inequalities on a lattice and collect failures.

    The shifted-ratio bound is sampled where its argument covers it: ``v >= u``
    and ``n >= 1``.
    """

    violations: list[InequalityViolation] = []
    for u in u_values:
        for j in range(1, index_max + 1):
            lhs, rhs = factorial_lower_bound(u, j, q)
            if lhs < rhs * (1.0 - rel_tol):
                violations.append(InequalityViolation("factorial_lower", {"u": u, "j": j}, lhs, rhs))
        for n in range(index_max + 1):
            lhs, rhs = ratio_upper_bound(u, n, q)
            if lhs > rhs * (1.0 + rel_tol):
                violations.append(InequalityViolation("ratio_upper", {"u": u, "n": n}, lhs, rhs))
        for v in v_values:
            if v < u:
                continue
            for k in range(index_max + 1):
                for n in range(1, index_max + 1):
                    lhs, rhs = shifted_ratio_upper_bound(u, v, k, n, q)
                    if lhs > rhs * (1.0 + rel_tol):
                        point = {"u": u, "v": v, "k": k, "n": n}
                        violations.append(InequalityViolation("shifted_ratio_upper", point, lhs, rhs))
    logger.debug("[qcore] inequality lattice at q=%s: %d violations", q, len(violations))
    return violations


__all__ = [
    "QLike",
    "is_integer",
    "is_nonpositive_integer",
    "qpow",
    "qpoch_finite",
    "qpoch_finite_many",
    "qpoch_infinite",
    "qpoch_infinite_many",
    "qpoch_infinite_values",
    "qpoch_general",
    "qnumber",
    "qfactorial",
    "qgamma",
    "log_gamma_values",
    "log_gamma_complex",
    "gamma_complex",
    "gamma_values",
    "gamma_ratio",
    "rising_factorial",
    "pochhammer_general",
    "InequalityViolation",
    "factorial_lower_bound",
    "ratio_upper_bound",
    "shifted_ratio_upper_bound",
    "check_inequalities",
]
