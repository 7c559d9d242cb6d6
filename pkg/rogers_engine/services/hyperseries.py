"""Basic hypergeometric, generalized hypergeometric and very-well-poised series.

Series are summed through their term ratios. A numerator parameter equal to
``q^{-n}`` (or ``-n`` for the classical series) terminates the sum after exactly
``n + 1`` terms; otherwise the sum runs until ``|term| <= term_eps * |sum|``
once the term ratio has settled below one.
"""

from __future__ import annotations

import math
from typing import Sequence

import numpy as np
from numpy.typing import ArrayLike, NDArray

from rogers_engine.core.exceptions import DenominatorPole, DomainViolation, NonConvergent
from rogers_engine.core.logging import get_logger
from rogers_engine.core.models import EvalResult, HypSpec, PhiSpec, QBase, TruncationPolicy
from rogers_engine.services.qcore import is_nonpositive_integer, qpoch_infinite

logger = get_logger(__name__)

ComplexArray = NDArray[np.complex128]

_ZERO_TOL = 1e-12


def _policy(pol: TruncationPolicy | None) -> TruncationPolicy:
    return pol if pol is not None else TruncationPolicy.from_settings()


def _reach(param: complex, qabs: float, cap: int) -> int:
    """Largest k for which ``1 - param q^k`` can still vanish."""

    size = abs(param)
    if size <= 0.5:
        return 0
    return min(cap, int(math.log(0.5 / size) / math.log(qabs)) + 1)


def _first_q_zero(param: complex, q: complex, cap: int) -> int | None:
    """Smallest k <= cap with ``param q^k == 1`` (to rounding), or None."""

    if cap < 0:
        return None
    reach = _reach(param, abs(q), cap)
    if reach == 0 and abs(1.0 - param) > _ZERO_TOL:
        return None
    factors = np.abs(1.0 - param * q ** np.arange(reach + 1))
    hits = np.flatnonzero(factors <= _ZERO_TOL)
    return int(hits[0]) if hits.size else None


def _first_int_zero(param: complex, cap: int) -> int | None:
    if is_nonpositive_integer(param, 1e-12):
        n = -round(param.real)
        return n if n <= cap else None
    return None


def termination_index(spec: PhiSpec, pol: TruncationPolicy | None = None) -> int | None:
    """Return ``n`` when a numerator parameter is ``q^{-n}``, else None."""

    pol = _policy(pol)
    hits = [_first_q_zero(a, spec.q.q, pol.max_terms) for a in spec.num]
    found = [k for k in hits if k is not None]
    return min(found) if found else None


def _check_phi_denominators(spec: PhiSpec, last: int) -> None:
    """Raise when a denominator factor ``1 - b q^k`` vanishes for some k <= last."""

    for b in spec.den:
        k = _first_q_zero(b, spec.q.q, last)
        if k is not None:
            raise DenominatorPole(f"denominator parameter {b} vanishes at k={k}", index=k)


def phi(spec: PhiSpec, pol: TruncationPolicy | None = None) -> EvalResult:
    """Evaluate the basic hypergeometric series r phi s."""

    pol = _policy(pol)
    q = spec.q.q
    r, s = len(spec.num), len(spec.den)
    exponent = 1 + s - r
    if spec.z == 0:
        return EvalResult(1.0 + 0.0j, 1, True, 0.0)

    stop = termination_index(spec, pol)
    if stop is None:
        if r > s + 1 or (r == s + 1 and abs(spec.z) >= 1.0):
            raise NonConvergent(
                f"{r}phi{s} does not converge at |z|={abs(spec.z):.6g} without termination"
            )
        _check_phi_denominators(spec, pol.max_terms)
    else:
        _check_phi_denominators(spec, stop - 1)

    term = 1.0 + 0.0j
    total = 1.0 + 0.0j
    ratio = 0.0
    limit = stop if stop is not None else pol.max_terms - 1
    k = 0
    converged = stop is not None
    while k < limit:
        qk = q**k
        factor = spec.z / (1.0 - qk * q)
        for a in spec.num:
            factor *= 1.0 - a * qk
        for b in spec.den:
            factor /= 1.0 - b * qk
        if exponent:
            factor *= (-qk) ** exponent
        term *= factor
        total += term
        k += 1
        ratio = abs(factor)
        if stop is None and ratio < 1.0 and abs(term) <= max(pol.term_eps * abs(total), pol.abs_floor):
            converged = True
            break
    tail = 0.0 if stop is not None else abs(term) * ratio / max(1.0 - ratio, 1e-300)
    if not converged:
        logger.warning("[hyperseries] %dphi%d hit max_terms=%d", r, s, pol.max_terms)
    logger.debug("[hyperseries] %dphi%d summed %d terms, converged=%s", r, s, k + 1, converged)
    return EvalResult(total, k + 1, converged, tail)


def hyp_termination_index(spec: HypSpec, pol: TruncationPolicy | None = None) -> int | None:
    """Return ``n`` when a numerator parameter is ``-n``, else None."""

    pol = _policy(pol)
    found = [k for k in (_first_int_zero(a, pol.max_terms) for a in spec.num) if k is not None]
    return min(found) if found else None


def hyp(spec: HypSpec, pol: TruncationPolicy | None = None) -> EvalResult:
    """Evaluate the generalized hypergeometric series p F q."""

    pol = _policy(pol)
    p, r = len(spec.num), len(spec.den)
    if spec.z == 0:
        return EvalResult(1.0 + 0.0j, 1, True, 0.0)

    stop = hyp_termination_index(spec, pol)
    if stop is None:
        excess = sum(spec.den, 0.0j) - sum(spec.num, 0.0j)
        on_circle = math.isclose(abs(spec.z), 1.0, rel_tol=0.0, abs_tol=1e-15)
        if p > r + 1 or (p == r + 1 and abs(spec.z) > 1.0 and not on_circle):
            raise NonConvergent(f"{p}F{r} does not converge at |z|={abs(spec.z):.6g}")
        if p == r + 1 and on_circle and excess.real <= 0:
            raise NonConvergent(
                f"{p}F{r} at |z|=1 needs positive parametric excess, got {excess.real:.6g}"
            )
    upto = stop if stop is not None else pol.max_terms
    for b in spec.den:
        k = _first_int_zero(b, upto)
        if k is not None and (stop is None or k < stop):
            raise DenominatorPole(f"denominator parameter {b} is -{k}", index=k)

    term = 1.0 + 0.0j
    total = 1.0 + 0.0j
    ratio = 0.0
    limit = stop if stop is not None else pol.max_terms - 1
    k = 0
    converged = stop is not None
    while k < limit:
        factor = spec.z / (k + 1)
        for a in spec.num:
            factor *= a + k
        for b in spec.den:
            factor /= b + k
        term *= factor
        total += term
        k += 1
        ratio = abs(factor)
        if stop is None and ratio < 1.0 and abs(term) <= max(pol.term_eps * abs(total), pol.abs_floor):
            converged = True
            break
    tail = 0.0 if stop is not None else abs(term) * ratio / max(1.0 - ratio, 1e-300)
    if not converged:
        logger.warning("[hyperseries] %dF%d hit max_terms=%d", p, r, pol.max_terms)
    logger.debug("[hyperseries] %dF%d summed %d terms, converged=%s", p, r, k + 1, converged)
    return EvalResult(total, k + 1, converged, tail)


def vwp_W_spec(a: complex, b: complex, c: complex, d: complex, e: complex, f: complex) -> HypSpec:
    """The very-well-poised 7F6 of unit argument behind ``W(a; b, c, d, e, f)``."""

    rest = (b, c, d, e, f)
    return HypSpec(
        (a, 1.0 + a / 2.0, *rest),
        (a / 2.0, *(1.0 + a - x for x in rest)),
        1.0,
    )


def vwp_W(
    a: complex,
    b: complex,
    c: complex,
    d: complex,
    e: complex,
    f: complex,
    pol: TruncationPolicy | None = None,
) -> EvalResult:
    """Bailey's ``W(a; b, c, d, e, f)``, a very-well-poised 7F6 at argument one."""

    return hyp(vwp_W_spec(complex(a), complex(b), complex(c), complex(d), complex(e), complex(f)), pol)


def _vwp_denominators(
    a: complex, rest: Sequence[complex], qv: complex, den: Sequence[complex] | None
) -> tuple[complex, ...]:
    """``q a / b`` for each entry of ``rest`` unless the caller supplies them."""

    if den is not None:
        if len(den) != len(rest):
            raise DomainViolation(f"expected {len(rest)} denominators, got {len(den)}")
        return tuple(complex(d) for d in den)
    if any(b == 0 for b in rest):
        raise DomainViolation("a zero parameter needs its denominator q a / b passed explicitly")
    return tuple(qv * a / b for b in rest)


def vwp_phi_spec(
    a: complex,
    rest: Sequence[complex],
    q: QBase | complex,
    z: complex,
    den: Sequence[complex] | None = None,
) -> PhiSpec:
    """The explicit ``(r+1) phi r`` layout with the ``q sqrt(a), -q sqrt(a)`` pair.

    ``den`` replaces the computed ``q a / b`` denominators, which is how limits
    with ``a = 0`` or ``b = 0`` are written.
    """

    qv = QBase.of(q).q
    root = np.sqrt(complex(a))
    return PhiSpec(
        (a, qv * root, -qv * root, *rest),
        (root, -root, *_vwp_denominators(a, rest, qv, den)),
        qv,
        z,
    )


def vwp_phi(
    a: complex,
    rest: Sequence[complex],
    q: QBase | complex,
    z: complex,
    pol: TruncationPolicy | None = None,
    den: Sequence[complex] | None = None,
) -> EvalResult:
    """Very-well-poised series with the square-root pair folded into ``(1-aq^{2k})/(1-a)``.

    Sums ``sum_k (1 - a q^{2k})/(1 - a) (a, rest;q)_k / (q, qa/rest;q)_k z^k``, which
    equals :func:`phi` on :func:`vwp_phi_spec` without choosing a branch of ``sqrt(a)``.
    """

    pol = _policy(pol)
    qv = QBase.of(q).q
    a = complex(a)
    if a == 1:
        raise DomainViolation("the folded very-well-poised factor (1 - a q^2k)/(1 - a) needs a != 1")
    rest = tuple(complex(b) for b in rest)
    den = _vwp_denominators(a, rest, qv, den)
    bare = PhiSpec((a, *rest), den, qv, z)
    stop = termination_index(bare, pol)
    if stop is None and abs(z) >= 1.0:
        raise NonConvergent(f"very-well-poised series does not converge at |z|={abs(z):.6g}")
    _check_phi_denominators(bare, stop - 1 if stop is not None else pol.max_terms)

    base = 1.0 + 0.0j
    total = 1.0 + 0.0j
    ratio = 0.0
    limit = stop if stop is not None else pol.max_terms - 1
    k = 0
    converged = stop is not None
    while k < limit:
        qk = qv**k
        factor = z / (1.0 - qk * qv)
        for b in (a, *rest):
            factor *= 1.0 - b * qk
        for b in den:
            factor /= 1.0 - b * qk
        base *= factor
        k += 1
        term = base * (1.0 - a * qv ** (2 * k)) / (1.0 - a)
        total += term
        ratio = abs(factor)
        if stop is None and ratio < 1.0 and abs(term) <= max(pol.term_eps * abs(total), pol.abs_floor):
            converged = True
            break
    tail = 0.0 if stop is not None else abs(term) * ratio / max(1.0 - ratio, 1e-300)
    logger.debug("[hyperseries] vwp series summed %d terms, converged=%s", k + 1, converged)
    return EvalResult(total, k + 1, converged, tail)


def phi_terminating_values(
    num: Sequence[ArrayLike],
    den: Sequence[ArrayLike],
    q: complex,
    z: ArrayLike,
    n: int,
) -> tuple[ComplexArray, NDArray[np.float64]]:
    """Sum terms ``k = 0..n`` of an r phi s with array-valued parameters.

    Returns the partial sum and the sum of absolute terms, whose ratio measures
    the cancellation of the definition.
    """

    arrays = [np.asarray(a, dtype=np.complex128) for a in num]
    dens = [np.asarray(b, dtype=np.complex128) for b in den]
    zz = np.asarray(z, dtype=np.complex128)
    exponent = 1 + len(dens) - len(arrays)
    shape = np.broadcast_shapes(zz.shape, *(a.shape for a in arrays), *(b.shape for b in dens))
    term = np.ones(shape, dtype=np.complex128)
    total = term.copy()
    magnitude = np.ones(shape, dtype=np.float64)
    for k in range(n):
        qk = q**k
        factor = zz / (1.0 - qk * q)
        for a in arrays:
            factor = factor * (1.0 - a * qk)
        for b in dens:
            denominator = 1.0 - b * qk
            if np.any(np.abs(denominator) <= _ZERO_TOL):
                raise DenominatorPole(f"denominator vanishes at k={k}", index=k)
            factor = factor / denominator
        if exponent:
            factor = factor * (-qk) ** exponent
        term = term * factor
        total = total + term
        magnitude = magnitude + np.abs(term)
    return total, magnitude


def hyp_terminating_values(
    num: Sequence[ArrayLike],
    den: Sequence[ArrayLike],
    z: ArrayLike,
    n: int,
) -> tuple[ComplexArray, NDArray[np.float64]]:
    """Sum terms ``k = 0..n`` of a p F q with array-valued parameters or argument."""

    arrays = [np.asarray(a, dtype=np.complex128) for a in num]
    dens = [np.asarray(b, dtype=np.complex128) for b in den]
    zz = np.asarray(z, dtype=np.complex128)
    shape = np.broadcast_shapes(zz.shape, *(a.shape for a in arrays), *(b.shape for b in dens))
    term = np.ones(shape, dtype=np.complex128)
    total = term.copy()
    magnitude = np.ones(shape, dtype=np.float64)
    for k in range(n):
        factor = zz / (k + 1)
        for a in arrays:
            factor = factor * (a + k)
        for b in dens:
            denominator = b + k
            if np.any(np.abs(denominator) <= _ZERO_TOL):
                raise DenominatorPole(f"denominator vanishes at k={k}", index=k)
            factor = factor / denominator
        term = term * factor
        total = total + term
        magnitude = magnitude + np.abs(term)
    return total, magnitude


def qbinomial_product(
    a: complex, q: QBase | complex, z: complex, pol: TruncationPolicy | None = None
) -> complex:
    """Product side ``(az;q)_inf/(z;q)_inf`` of the q-binomial theorem."""

    return qpoch_infinite(complex(a) * z, q, pol).value / qpoch_infinite(z, q, pol).value


__all__ = [
    "termination_index",
    "hyp_termination_index",
    "phi",
    "hyp",
    "vwp_W_spec",
    "vwp_W",
    "vwp_phi_spec",
    "vwp_phi",
    "phi_terminating_values",
    "hyp_terminating_values",
    "qbinomial_product",
]
