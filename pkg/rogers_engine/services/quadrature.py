"""Orthogonality weights, norms, quadrature rules and the definite-integral corollaries.

q-families are integrated in ``theta`` (``x = cos theta``) with a midpoint rule, which
absorbs the ``1/sqrt(1-x^2)`` factor of their orthogonality measure. Jacobi-type
weights use Golub-Welsch Gauss-Jacobi rules whose exponents also absorb any
``(1-x)^{-nu}`` factor of the integrand; Laguerre uses generalized Gauss-Laguerre.
The Wilson weight is integrated with Gauss-Legendre on ``(0, 40 + n]``.
Every integral is accepted by node doubling.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable, Mapping, Sequence

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy.linalg import eigh_tridiagonal
from scipy.special import betaln, gammaln, roots_legendre

from rogers_engine.core.config import settings
from rogers_engine.core.exceptions import DomainViolation, NonConvergent
from rogers_engine.core.identities import (
    COROLLARY_CATALOG,
    FAMILY_PARAMS,
    Q_FAMILIES,
    CorollaryId,
    IdentityId,
    PolyFamily,
)
from rogers_engine.core.logging import get_logger
from rogers_engine.core.models import (
    CoeffRequest,
    HypSpec,
    IntegralResult,
    PhiSpec,
    PolySpec,
    QBase,
    TruncationPolicy,
    VerificationReport,
    WeightSpec,
)
from rogers_engine.services.expansions import TAIL_IDENTITIES, coefficient, lhs_tail_values, lhs_values, target_spec
from rogers_engine.services.hyperseries import hyp, phi
from rogers_engine.services.polyfamilies import askey_wilson_map, poly_sequence, unit_exponential
from rogers_engine.services.qcore import (
    gamma_ratio,
    log_gamma_values,
    qpoch_finite,
    qpoch_infinite_many,
    qpoch_infinite_values,
    qpow,
    rising_factorial,
)
from rogers_engine.services.residuals import REL_FLOOR, ResidualTracker, plain, relative_error

logger = get_logger(__name__)

FloatArray = NDArray[np.float64]
ComplexArray = NDArray[np.complex128]
Integrand = Callable[[FloatArray], ArrayLike]

_GAUSS_MAX_NODES = 1024
_WILSON_CUTOFF = 40.0
_SQRT_PI = math.sqrt(math.pi)
_EPS = float(np.finfo(np.float64).eps)
# doubling differences below this many ulps of sum |f w| are rounding noise
_NOISE_ULPS = 512

# Corollaries whose integrand carries (1-x)^{-nu} (x^{-nu} for Laguerre)
_SINGULAR_IDENTITIES = frozenset(
    {IdentityId.JACOBI_1MX, IdentityId.GEGEN_1MX, IdentityId.CHEBY_1MX, IdentityId.LAGUERRE_1MX}
)


@dataclass(slots=True, frozen=True)
class QuadratureRule:
    """Nodes in the polynomial variable and weights that include the weight function."""

    nodes: FloatArray
    weights: FloatArray


@dataclass(slots=True, frozen=True)
class GrowthFit:
    """Fitted bound ``|v_n| <= K (n+1)^(sigma+1) ratio^n |v_0|``."""

    sigma: float
    K: float
    ratio: float
    scale: float

    def log_bound(self, n: ArrayLike) -> FloatArray:
        """Natural log of the bound at each index of ``n``."""
        nn = np.asarray(n, dtype=np.float64)
        return (
            math.log(self.K) + (self.sigma + 1.0) * np.log(nn + 1.0)
            + nn * math.log(self.ratio) + math.log(self.scale)
        )

    def excess(self, n: ArrayLike, values: ArrayLike) -> float:
        """Largest relative amount by which ``|values|`` exceed the bound (0 when it holds)."""
        mags = np.abs(np.asarray(values, dtype=np.complex128))
        if mags.size == 0:
            return 0.0
        with np.errstate(divide="ignore"):
            gap = np.log(mags) - self.log_bound(n)
        return float(np.max(np.maximum(np.expm1(np.minimum(gap, 700.0)), 0.0)))


def _log_magnitudes(values: Sequence[complex]) -> FloatArray:
    with np.errstate(divide="ignore"):
        return np.log(np.abs(np.asarray(values, dtype=np.complex128)))


def fit_growth_exponent(values: Sequence[complex], ratio: float = 1.0) -> GrowthFit:
    """Least-squares power law through the tail of ``|v_n| / (ratio^n |v_0|)``.

    The slope is fitted on the second half of the nonzero entries; ``K`` is the
    smallest constant making the bound (with one extra power of ``n+1``) hold on
    every supplied index. Works in logs so that ``ratio^n`` may underflow.
    """

    logs = _log_magnitudes(values)
    if logs.size < 4 or not np.isfinite(logs[0]):
        raise DomainViolation("growth fit needs at least four values and v_0 != 0")
    if not ratio > 0:
        raise DomainViolation(f"growth ratio must be positive, got {ratio}")
    n = np.arange(logs.size, dtype=np.float64)
    scaled = logs - n * math.log(ratio) - logs[0]
    mask = np.isfinite(scaled)
    mask[: logs.size // 2] = False
    if np.count_nonzero(mask) < 2:
        sigma = 0.0
    else:
        sigma = float(np.polyfit(np.log(n[mask] + 1.0), scaled[mask], 1)[0])
    finite = np.isfinite(scaled)
    log_k = float(np.max(scaled[finite] - (sigma + 1.0) * np.log(n[finite] + 1.0)))
    return GrowthFit(sigma, math.exp(log_k), ratio, float(np.exp(logs[0])))


# ---------------------------------------------------------------------------
# Weights and norms
# ---------------------------------------------------------------------------


def _aw_weight(params: Sequence[complex], q: complex, x: ComplexArray) -> FloatArray:
    w = unit_exponential(x)
    top = qpoch_infinite_values(w * w, q)
    bottom = np.ones_like(w)
    for a in params:
        bottom = bottom * qpoch_infinite_values(a * w, q)
    return np.abs(top / bottom) ** 2


def weight_values(w: WeightSpec, x: ArrayLike) -> FloatArray:
    """Weight of ``w`` at every point of ``x``.

    q-family weights exclude the ``1/sqrt(1-x^2)`` factor; the Wilson weight is
    taken at its real variable.
    """

    family = w.family
    xx = np.asarray(x, dtype=np.float64)
    p = w.params
    if family in Q_FAMILIES:
        if np.any(np.abs(xx) > 1.0):
            raise DomainViolation(f"{family.value} weight lives on [-1, 1]")
        q = w.q.q  # type: ignore[union-attr]
        xc = xx.astype(np.complex128)
        if family is PolyFamily.ASKEY_WILSON:
            return _aw_weight(p, q, xc)
        if family is PolyFamily.CQ_JACOBI:
            return _aw_weight(askey_wilson_map(p[0], p[1], q), q, xc)
        e2 = unit_exponential(xc) ** 2
        top = qpoch_infinite_values(e2, q)
        if family is PolyFamily.CQ_HERMITE:
            return np.abs(top) ** 2
        beta = p[0] if family is PolyFamily.CQ_ULTRASPHERICAL else qpow(q, 0.5)
        return np.abs(top / qpoch_infinite_values(beta * e2, q)) ** 2
    if family is PolyFamily.WILSON:
        if np.any(xx < 0):
            raise DomainViolation("wilson weight lives on [0, inf)")
        out = np.zeros_like(xx)
        inside = xx > 0
        ix = 1j * xx[inside]
        logs = sum(log_gamma_values(a + ix) for a in p) - log_gamma_values(2.0 * ix)
        out[inside] = np.exp(2.0 * np.real(logs))
        return out
    if family is PolyFamily.LAGUERRE:
        if np.any(xx < 0):
            raise DomainViolation("laguerre weight lives on [0, inf)")
        return xx ** p[0].real * np.exp(-xx)
    if np.any(np.abs(xx) > 1.0):
        raise DomainViolation(f"{family.value} weight lives on [-1, 1]")
    a, b = _jacobi_exponents(w)
    return (1.0 - xx) ** a * (1.0 + xx) ** b


def weight_eval(w: WeightSpec, x: float) -> float:
    """Weight of ``w`` at a single point."""

    return float(weight_values(w, np.asarray([x]))[0])


def _jacobi_exponents(w: WeightSpec) -> tuple[float, float]:
    family = w.family
    if family is PolyFamily.JACOBI:
        return w.params[0].real, w.params[1].real
    if family is PolyFamily.GEGENBAUER:
        e = w.params[0].real - 0.5
        return e, e
    if family is PolyFamily.CHEBYSHEV_T:
        return -0.5, -0.5
    if family is PolyFamily.LEGENDRE:
        return 0.0, 0.0
    raise DomainViolation(f"{family.value} has no Jacobi-type weight")


def _pair_products(a: Sequence[complex], scale: complex) -> list[complex]:
    return [a[i] * a[j] * scale for i in range(4) for j in range(i + 1, 4)]


def aw_norm(a: Sequence[complex], q: complex, n: int) -> complex:
    """``h_n(a;q)``; the squared norm of ``p_n`` is ``2 pi h_n``."""

    prod = a[0] * a[1] * a[2] * a[3]
    qn = q**n
    top = qpoch_finite(prod * qn / q, q, n) * qpoch_infinite_many([prod * qn * qn], q).value
    bottom = qpoch_infinite_many([qn * q, *_pair_products(a, qn)], q).value
    return top / bottom


def cq_jacobi_norm(alpha: complex, gamma: complex, q: complex, n: int) -> complex:
    """``g_n(alpha, gamma; q)``; the squared norm of ``P_n^{(alpha,gamma)}(x|q)`` is ``2 pi g_n``."""

    root = cmath.sqrt(alpha) * cmath.sqrt(gamma)
    sq = cmath.sqrt(q)
    ag = alpha * gamma
    top = (
        alpha**n * (1.0 - ag)
        * qpoch_finite(sq * alpha, q, n) * qpoch_finite(sq * gamma, q, n) * qpoch_finite(-q * root, q, n)
        * qpoch_infinite_many([sq * root, q * root], q).value
    )
    bottom = (
        (1.0 - q ** (2 * n) * ag)
        * qpoch_finite(q, q, n) * qpoch_finite(ag, q, n) * qpoch_finite(-root, q, n)
        * qpoch_infinite_many([q, sq * alpha, sq * gamma, -root, -sq * root], q).value
    )
    return top / bottom


def cq_ultra_norm(beta: complex, q: complex, n: int) -> complex:
    """Squared norm of ``C_n(x;beta|q)`` including the ``2 pi``."""

    top = 2.0 * math.pi * (1.0 - beta) * qpoch_infinite_many([beta, q * beta], q).value
    bottom = (1.0 - beta * q**n) * qpoch_infinite_many([beta * beta, q], q).value * qpoch_finite(q, q, n)
    return top * qpoch_finite(beta * beta, q, n) / bottom


def wilson_norm(a: Sequence[complex], n: int) -> complex:
    """``H_n(a)``, the squared norm of ``W_n(x^2; a)``."""

    s = sum(a) - 1.0 + n
    pairs = [a[i] + a[j] + n for i in range(4) for j in range(i + 1, 4)]
    return 2.0 * math.pi * math.factorial(n) * gamma_ratio(pairs, [s]) / (s + n)


def poly_norm(w: WeightSpec, n: int) -> complex:
    """Squared norm of the degree-``n`` polynomial of ``w``'s family under ``w``."""

    family, p = w.family, w.params
    if family is PolyFamily.ASKEY_WILSON:
        return 2.0 * math.pi * aw_norm(p, w.q.q, n)  # type: ignore[union-attr]
    if family is PolyFamily.CQ_JACOBI:
        return 2.0 * math.pi * cq_jacobi_norm(p[0], p[1], w.q.q, n)  # type: ignore[union-attr]
    if family is PolyFamily.CQ_ULTRASPHERICAL:
        return cq_ultra_norm(p[0], w.q.q, n)  # type: ignore[union-attr]
    if family is PolyFamily.CQ_HERMITE:
        q = w.q.q  # type: ignore[union-attr]
        return 2.0 * math.pi * qpoch_finite(q, q, n) / qpoch_infinite_many([q], q).value
    if family is PolyFamily.CQ_LEGENDRE:
        q = w.q.q  # type: ignore[union-attr]
        return q ** (n / 2.0) * cq_ultra_norm(qpow(q, 0.5), q, n)
    if family is PolyFamily.WILSON:
        return wilson_norm(p, n)
    if family is PolyFamily.LAGUERRE:
        return gamma_ratio([n + p[0] + 1.0], [n + 1.0])
    if family is PolyFamily.CHEBYSHEV_T:
        return math.pi if n == 0 else math.pi / 2.0
    if family is PolyFamily.LEGENDRE:
        return 2.0 / (2 * n + 1)
    if family is PolyFamily.GEGENBAUER:
        mu = p[0]
        return math.pi * 2.0 ** (1.0 - 2.0 * mu) * gamma_ratio([n + 2.0 * mu], [n + 1.0, mu, mu]) / (n + mu)
    alpha, beta = p
    s = alpha + beta + 2 * n + 1.0
    return 2.0 ** (alpha + beta + 1.0) / s * gamma_ratio(
        [n + alpha + 1.0, n + beta + 1.0], [n + alpha + beta + 1.0, n + 1.0]
    )


# ---------------------------------------------------------------------------
# Quadrature rules
# ---------------------------------------------------------------------------


def _golub_welsch(diag: FloatArray, off: FloatArray, log_mass: float) -> tuple[FloatArray, FloatArray]:
    nodes, vectors = eigh_tridiagonal(diag, off)
    return nodes, np.exp(log_mass) * vectors[0] ** 2


def gauss_jacobi(n: int, a: float, b: float) -> tuple[FloatArray, FloatArray]:
    """Nodes and weights for ``int (1-x)^a (1+x)^b f(x) dx``, ``a, b > -1``."""

    if not (a > -1.0 and b > -1.0):
        raise DomainViolation(f"Gauss-Jacobi needs exponents > -1, got ({a}, {b})")
    k = np.arange(n, dtype=np.float64)
    s = 2.0 * k + a + b
    diag = np.empty(n)
    diag[0] = (b - a) / (a + b + 2.0)
    if n > 1:
        diag[1:] = (b * b - a * a) / (s[1:] * (s[1:] + 2.0))
    kk = k[1:]
    sk = s[1:]
    off = np.empty(max(n - 1, 0))
    if n > 1:
        off[0] = 4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + a + b) ** 2 * (3.0 + a + b))
        rest = slice(1, None)
        off[rest] = (
            4.0 * kk[rest] * (kk[rest] + a) * (kk[rest] + b) * (kk[rest] + a + b)
            / (sk[rest] ** 2 * (sk[rest] + 1.0) * (sk[rest] - 1.0))
        )
    log_mass = (a + b + 1.0) * math.log(2.0) + float(betaln(a + 1.0, b + 1.0))
    return _golub_welsch(diag, np.sqrt(off), log_mass)


def gauss_laguerre(n: int, a: float) -> tuple[FloatArray, FloatArray]:
    """Nodes and weights for ``int_0^inf x^a e^{-x} f(x) dx``, ``a > -1``."""

    if not a > -1.0:
        raise DomainViolation(f"Gauss-Laguerre needs exponent > -1, got {a}")
    k = np.arange(n, dtype=np.float64)
    diag = 2.0 * k + a + 1.0
    off = np.sqrt(k[1:] * (k[1:] + a))
    return _golub_welsch(diag, off, float(gammaln(a + 1.0)))


def quadrature_rule(w: WeightSpec, n_nodes: int, *, shift: float = 0.0, degree: int = 0) -> QuadratureRule:
    """Rule for ``int f w`` with ``n_nodes`` nodes.

    ``shift`` multiplies the weight by ``(1-x)^{-shift}`` (``x^{-shift}`` for Laguerre).
    ``degree`` widens the Wilson cutoff to ``40 + degree``.
    """

    family = w.family
    if family in Q_FAMILIES or family is PolyFamily.WILSON:
        if shift:
            raise DomainViolation(f"{family.value} rules do not take an endpoint exponent")
        if family is PolyFamily.WILSON:
            t, tw = roots_legendre(n_nodes)
            cutoff = _WILSON_CUTOFF + degree
            nodes = 0.5 * cutoff * (t + 1.0)
            return QuadratureRule(nodes, 0.5 * cutoff * tw * weight_values(w, nodes))
        theta = (np.arange(n_nodes) + 0.5) * math.pi / n_nodes
        nodes = np.cos(theta)
        return QuadratureRule(nodes, math.pi / n_nodes * weight_values(w, nodes))
    if family is PolyFamily.LAGUERRE:
        nodes, weights = gauss_laguerre(n_nodes, w.params[0].real - shift)
        return QuadratureRule(nodes, weights)
    a, b = _jacobi_exponents(w)
    nodes, weights = gauss_jacobi(n_nodes, a - shift, b)
    return QuadratureRule(nodes, weights)


def _node_limits(w: WeightSpec) -> tuple[int, int]:
    if w.family is PolyFamily.WILSON:
        return settings.QSK_WILSON_NODES, settings.QSK_QUAD_MAX_NODES
    if w.family in Q_FAMILIES:
        return settings.QSK_QUAD_START_NODES, settings.QSK_QUAD_MAX_NODES
    return settings.QSK_QUAD_START_NODES, min(_GAUSS_MAX_NODES, settings.QSK_QUAD_MAX_NODES)


def integrate_many(
    f: Integrand,
    w: WeightSpec,
    nodes: int | None = None,
    *,
    shift: float = 0.0,
    degree: int = 0,
    rel_tol: float | None = None,
) -> tuple[ComplexArray, int, float, FloatArray]:
    """Integrate an array-valued ``f`` (nodes on its last axis) by node doubling.

    A doubling is accepted once every entry moved by at most ``rel_tol`` times its
    own value, or by no more than the rounding noise of a sum over ``|f| w``.
    Returns the integrals, the accepted node count, the doubling difference and
    the integrals of ``|f|``.
    """

    start, cap = _node_limits(w)
    n = nodes if nodes is not None else start
    tol = settings.QSK_QUAD_REL_TOL if rel_tol is None else rel_tol
    previous: ComplexArray | None = None
    while True:
        rule = quadrature_rule(w, n, shift=shift, degree=degree)
        weighted = np.asarray(f(rule.nodes), dtype=np.complex128) * rule.weights
        total = weighted.sum(axis=-1)
        magnitude = np.abs(weighted).sum(axis=-1)
        if previous is not None:
            allowed = np.maximum(
                np.maximum(tol * np.abs(total), _NOISE_ULPS * _EPS * magnitude), settings.QSK_ABS_FLOOR
            )
            diff = np.abs(total - previous)
            err = float(np.max(diff))
            if np.all(diff <= allowed):
                logger.debug("[quadrature] %s accepted at %d nodes", w.family.value, n)
                return total, n, err, magnitude
        if 2 * n > cap:
            raise NonConvergent(f"{w.family.value} quadrature did not stabilise by {n} nodes")
        previous = total
        n *= 2


def integrate_interval(
    f: Integrand,
    w: WeightSpec,
    nodes: int | None = None,
    *,
    shift: float = 0.0,
    degree: int = 0,
) -> IntegralResult:
    """``int f(x) w(x) dmu`` over the family's orthogonality domain."""

    total, used, err, magnitude = integrate_many(f, w, nodes, shift=shift, degree=degree)
    return IntegralResult(
        complex(np.asarray(total).reshape(-1)[0]), used, err, float(np.asarray(magnitude).reshape(-1)[0])
    )


# ---------------------------------------------------------------------------
# Orthogonality
# ---------------------------------------------------------------------------


def gram_matrix(w: WeightSpec, n_max: int) -> tuple[ComplexArray, int]:
    """Integrals of ``P_m P_n w`` for ``m, n <= n_max`` and the accepted node count."""

    spec = w.poly_spec()

    def products(x: FloatArray) -> ComplexArray:
        polys = poly_sequence(spec, n_max, x)
        return polys[:, None, :] * polys[None, :, :]

    total, used, _, _ = integrate_many(products, w, degree=2 * n_max)
    return total, used


def verify_orthogonality(
    w: WeightSpec,
    m: int,
    n: int,
    *,
    tol_off: float = 1e-10,
    tol_norm: float = 1e-8,
) -> VerificationReport:
    """Check one entry of the Gram matrix against zero or the displayed norm."""

    if not (0 <= m <= 12 and 0 <= n <= 12):
        raise DomainViolation(f"orthogonality checks take degrees <= 12, got ({m}, {n})")
    tracker = ResidualTracker(f"orthogonality:{w.family.value}", tol_norm if m == n else tol_off)
    point = {"m": m, "n": n}
    try:
        gram, used = gram_matrix(w, max(m, n))
    except NonConvergent as exc:
        tracker.nonconvergent(point, exc)
        return tracker.report(params=_weight_params(w))
    tracker.n_terms_used = used
    value = gram[m, n]
    if m == n:
        norm = poly_norm(w, n)
        residual = abs(value - norm) / abs(norm)
    else:
        residual = abs(value) / math.sqrt(abs(poly_norm(w, m)) * abs(poly_norm(w, n)))
    tracker.add(float(residual), point)
    return tracker.report(params=_weight_params(w))


def _weight_params(w: WeightSpec) -> dict[str, object]:
    names = FAMILY_PARAMS[w.family]
    params: dict[str, object] = {name: plain(complex(v)) for name, v in zip(names, w.params)}
    if w.q is not None:
        params["q"] = plain(complex(w.q.q))
    return params


def verify_orthogonality_block(
    w: WeightSpec,
    n_max: int = 8,
    *,
    tol_off: float = 1e-10,
    tol_norm: float = 1e-8,
) -> list[VerificationReport]:
    """Off-diagonal and diagonal reports for every ``m, n <= n_max``."""

    if not 0 <= n_max <= 12:
        raise DomainViolation(f"orthogonality checks take degrees <= 12, got {n_max}")
    label = w.family.value
    off = ResidualTracker(f"orthogonality:{label}:off_diagonal", tol_off)
    diagonal = ResidualTracker(f"orthogonality:{label}:norms", tol_norm)
    params, grid = _weight_params(w), {"n_max": n_max}
    try:
        gram, used = gram_matrix(w, n_max)
    except NonConvergent as exc:
        off.nonconvergent(grid, exc)
        diagonal.nonconvergent(grid, exc)
        return [off.report(params=params, grid=grid), diagonal.report(params=params, grid=grid)]
    off.n_terms_used = diagonal.n_terms_used = used
    norms = np.abs([poly_norm(w, k) for k in range(n_max + 1)])
    for i, j in np.ndindex(gram.shape):
        if i == j:
            diagonal.add(float(abs(gram[i, i] - poly_norm(w, i)) / norms[i]), {"n": i})
        else:
            off.add(float(abs(gram[i, j]) / math.sqrt(norms[i] * norms[j])), {"m": i, "n": j})
    return [off.report(params=params, grid=grid), diagonal.report(params=params, grid=grid)]


# ---------------------------------------------------------------------------
# Definite-integral corollaries
# ---------------------------------------------------------------------------


def _p(params: Mapping[str, complex], name: str) -> complex:
    return complex(params[name])


def _corollary_weight(cor: CorollaryId, params: Mapping[str, complex], q: QBase | None) -> WeightSpec:
    family = COROLLARY_CATALOG[cor].family
    if cor is CorollaryId.CQULTRA_INT:
        return WeightSpec(family, (_p(params, "gamma"),), q)
    if cor is CorollaryId.GEGEN_STIELTJES:
        return WeightSpec(family, (_p(params, "mu"),))
    names = FAMILY_PARAMS[family]
    return WeightSpec(family, tuple(_p(params, name) for name in names), q if family in Q_FAMILIES else None)


def _closed_form(
    cor: CorollaryId, n: int, params: Mapping[str, complex], q: QBase | None, pol: TruncationPolicy
) -> complex:
    if cor is CorollaryId.AW_INT:
        a = tuple(_p(params, f"a{i}") for i in range(1, 5))
        c_n = coefficient(CoeffRequest(IdentityId.AW_ROGERS, n, params, q, pol)).value
        return 2.0 * math.pi * aw_norm(a, q.q, n) * c_n  # type: ignore[union-attr]
    if cor is CorollaryId.CQJACOBI_INT:
        d_n = coefficient(CoeffRequest(IdentityId.CQJACOBI_ROGERS, n, params, q, pol)).value
        g_n = cq_jacobi_norm(_p(params, "alpha"), _p(params, "gamma"), q.q, n)  # type: ignore[union-attr]
        return 2.0 * math.pi * g_n * d_n
    if cor is CorollaryId.WILSON_INT:
        a = tuple(_p(params, f"a{i}") for i in range(1, 5))
        return wilson_norm(a, n) * coefficient(CoeffRequest(IdentityId.WILSON_LIMIT, n, params, None, pol)).value
    if cor is CorollaryId.CQULTRA_INT:
        qv = q.q  # type: ignore[union-attr]
        beta, gamma, t = _p(params, "beta"), _p(params, "gamma"), _p(params, "t")
        front = (
            2.0 * math.pi
            * qpoch_infinite_many([gamma, gamma * qv], qv, pol).value
            * qpoch_finite(beta, qv, n) * qpoch_finite(gamma * gamma, qv, n)
            / (
                qpoch_infinite_many([gamma * gamma, qv], qv, pol).value
                * qpoch_finite(qv, qv, n) * qpoch_finite(qv * gamma, qv, n)
            )
        )
        series = phi(PhiSpec((beta / gamma, beta * qv**n), (gamma * qv ** (n + 1),), qv, gamma * t * t), pol)
        return front * series.value * t**n
    if cor is CorollaryId.GEGEN_STIELTJES:
        mu, lam, t = _p(params, "mu"), _p(params, "lambda"), _p(params, "t")
        front = (
            _SQRT_PI * gamma_ratio([mu + 0.5], [mu + 1.0])
            * rising_factorial(lam, n) * rising_factorial(2.0 * mu, n)
            / (rising_factorial(mu + 1.0, n) * math.factorial(n))
        )
        series = hyp(HypSpec((lam - mu, lam + n), (mu + n + 1.0,), t * t), pol)
        return front * series.value * t**n
    nu = _p(params, "nu")
    if cor is CorollaryId.JACOBI_1MX_INT:
        alpha, beta = _p(params, "alpha"), _p(params, "beta")
        return (
            2.0 ** (alpha + beta + 1.0 - nu) * rising_factorial(nu, n)
            * gamma_ratio([alpha + 1.0 - nu, beta + 1.0 + n], [n + 1.0, alpha + beta + 2.0 - nu + n])
        )
    if cor is CorollaryId.GEGEN_1MX_INT:
        mu = _p(params, "mu")
        return (
            2.0 ** (1.0 - nu) * _SQRT_PI * rising_factorial(nu, n)
            * gamma_ratio([n + 2.0 * mu, mu - nu + 0.5], [n + 1.0, mu, 2.0 * mu + 1.0 - nu + n])
        )
    if cor is CorollaryId.CHEBY_1MX_INT:
        return _SQRT_PI * 2.0 ** (-nu) * rising_factorial(nu, n) * gamma_ratio([0.5 - nu], [1.0 - nu + n])
    alpha = _p(params, "alpha")
    return rising_factorial(nu, n) * gamma_ratio([alpha + 1.0 - nu], [n + 1.0])


_COROLLARY_IDENTITY: dict[CorollaryId, IdentityId] = {
    CorollaryId.AW_INT: IdentityId.AW_ROGERS,
    CorollaryId.WILSON_INT: IdentityId.WILSON_LIMIT,
    CorollaryId.CQJACOBI_INT: IdentityId.CQJACOBI_ROGERS,
    CorollaryId.CQULTRA_INT: IdentityId.ROGERS_GAMMA,
    CorollaryId.GEGEN_STIELTJES: IdentityId.GEGEN_GAMMA,
}

_SINGULAR_SHIFT: dict[CorollaryId, str] = {
    CorollaryId.JACOBI_1MX_INT: "alpha-nu+1",
    CorollaryId.GEGEN_1MX_INT: "mu-nu+1/2",
    CorollaryId.CHEBY_1MX_INT: "1/2-nu",
    CorollaryId.LAGUERRE_1MX_INT: "alpha+1-nu",
}


def _singular_margin(cor: CorollaryId, params: Mapping[str, complex]) -> float:
    nu = _p(params, "nu").real
    if cor is CorollaryId.GEGEN_1MX_INT:
        return _p(params, "mu").real + 0.5 - nu
    if cor is CorollaryId.CHEBY_1MX_INT:
        return 0.5 - nu
    return _p(params, "alpha").real + 1.0 - nu


def _check_corollary(cor: CorollaryId, params: Mapping[str, complex], q: QBase | None) -> None:
    descriptor = COROLLARY_CATALOG[cor]
    missing = [name for name in descriptor.required if name not in params]
    if missing:
        raise DomainViolation(f"corollary {cor.value} requires parameters {missing}")
    if descriptor.q_required and q is None:
        raise DomainViolation(f"corollary {cor.value} requires a base q")
    if "t" in descriptor.required and cor is not CorollaryId.WILSON_INT and not abs(_p(params, "t")) < 1.0:
        raise DomainViolation(f"corollary {cor.value} requires |t| < 1")
    if cor is CorollaryId.GEGEN_STIELTJES:
        for name in ("mu", "lambda"):
            value = _p(params, name).real
            if not value > -0.5 or value == 0:
                raise DomainViolation(f"gegen_stieltjes needs {name} in (-1/2, inf) without 0")


def _projected_lhs(
    identity: IdentityId,
    params: Mapping[str, complex],
    n: int,
    q: QBase | None,
    pol: TruncationPolicy | None,
) -> Integrand:
    """LHS for an inner product with ``P_n``.

    A generating function in ``t`` loses its terms of degree below ``n``, which
    are orthogonal to ``P_n``. What remains is of size ``t^n`` and integrates
    without cancelling against the dropped part.
    """

    def full(x: FloatArray) -> ComplexArray:
        return lhs_values(identity, params, x, q, pol)

    if n == 0 or identity not in TAIL_IDENTITIES:
        return full

    def tail(x: FloatArray) -> ComplexArray:
        try:
            return lhs_tail_values(identity, params, x, n, q, pol)
        except NonConvergent:
            logger.debug("[quadrature] %s tail too long at n=%d, integrating the full LHS", identity.value, n)
            return full(x)

    return tail


def corollary_residual(integral: IntegralResult, closed: complex) -> float:
    """Relative residual of a corollary; a vanishing closed form is judged against ``int |f| w``."""

    scale = REL_FLOOR if closed != 0 else max(integral.magnitude, REL_FLOOR)
    return relative_error(closed, integral.value, scale)


def corollary_sides(
    cor: CorollaryId | str,
    n: int,
    params: Mapping[str, complex],
    q: QBase | complex | None = None,
    pol: TruncationPolicy | None = None,
) -> tuple[IntegralResult, complex]:
    """Quadrature of a corollary's left side and its closed form."""

    cor = CorollaryId(cor)
    policy = pol if pol is not None else TruncationPolicy.from_settings()
    base = QBase.of(q) if q is not None else None
    _check_corollary(cor, params, base)
    w = _corollary_weight(cor, params, base)
    spec = w.poly_spec()
    if cor in _SINGULAR_SHIFT:
        nu = _p(params, "nu").real
        if not _singular_margin(cor, params) > 0:
            raise DomainViolation(f"corollary {cor.value} needs Re({_SINGULAR_SHIFT[cor]}) > 0")
        integral = integrate_interval(lambda x: poly_sequence(spec, n, x)[n], w, shift=nu)
    else:
        lhs = _projected_lhs(_COROLLARY_IDENTITY[cor], params, n, base, policy)

        def integrand(x: FloatArray) -> ComplexArray:
            return lhs(x) * poly_sequence(spec, n, x)[n]

        integral = integrate_interval(integrand, w, degree=n)
    return integral, complex(_closed_form(cor, n, params, base, policy))


def verify_integral_corollary(
    cor: CorollaryId | str,
    params: Mapping[str, complex],
    *,
    n_max: int = 8,
    q: QBase | complex | None = None,
    tol_rel: float = 1e-8,
) -> VerificationReport:
    """Compare quadrature against the closed form for ``n = 0..n_max``."""

    cor = CorollaryId(cor)
    tracker = ResidualTracker(f"integral:{cor.value}", tol_rel)
    for n in range(n_max + 1):
        try:
            integral, closed = corollary_sides(cor, n, params, q)
        except NonConvergent as exc:
            tracker.nonconvergent({"n": n}, exc)
            continue
        tracker.n_terms_used = max(tracker.n_terms_used, integral.nodes_used)
        point = {"n": n, "quadrature": integral.value, "closed_form": closed}
        tracker.add(corollary_residual(integral, closed), point)
    report_params = {name: plain(complex(v)) for name, v in params.items()}
    if q is not None:
        report_params["q"] = plain(complex(QBase.of(q).q))
    return tracker.report(params=report_params, grid={"n_max": n_max})


def project_coefficient(
    identity: IdentityId | str,
    params: Mapping[str, complex],
    n: int,
    q: QBase | complex | None = None,
    pol: TruncationPolicy | None = None,
) -> IntegralResult:
    """The ``n``-th expansion coefficient recovered as ``<LHS, P_n> / ||P_n||^2``."""

    identity = IdentityId(identity)
    base = QBase.of(q) if q is not None else None
    spec: PolySpec = target_spec(identity, params, base)
    w = WeightSpec(spec.family, spec.params, spec.q)
    norm = poly_norm(w, n)
    if identity in _SINGULAR_IDENTITIES:
        integral = integrate_interval(lambda x: poly_sequence(spec, n, x)[n], w, shift=complex(params["nu"]).real)
    else:
        lhs = _projected_lhs(identity, params, n, base, pol)
        integral = integrate_interval(lambda x: lhs(x) * poly_sequence(spec, n, x)[n], w, degree=n)
    return IntegralResult(
        integral.value / norm, integral.nodes_used, integral.est_error / abs(norm), integral.magnitude / abs(norm)
    )


def norm_growth_bound(w: WeightSpec, n_max: int = 40, *, ratio: float = 1.0) -> VerificationReport:
    """Fit ``|s_n| <= K (n+1)^sigma ratio^n |s_0|`` on ``n <= n_max`` and test it up to ``2 n_max``.

    ``s_n`` are the squared norms of ``w``'s family.
    """

    norms = [poly_norm(w, k) for k in range(2 * n_max + 1)]
    fit = fit_growth_exponent(norms[: n_max + 1], ratio)
    tracker = ResidualTracker(f"norm_growth:{w.family.value}", 1e-12, n_terms_used=n_max)
    for k in range(n_max + 1, 2 * n_max + 1):
        tracker.add(fit.excess([k], [norms[k]]), {"n": k, "sigma": fit.sigma, "K": fit.K})
    return tracker.report(params=_weight_params(w), grid={"n_max": n_max, "ratio": ratio})


__all__ = [
    "QuadratureRule",
    "GrowthFit",
    "fit_growth_exponent",
    "weight_values",
    "weight_eval",
    "aw_norm",
    "cq_jacobi_norm",
    "cq_ultra_norm",
    "wilson_norm",
    "poly_norm",
    "gauss_jacobi",
    "gauss_laguerre",
    "quadrature_rule",
    "integrate_many",
    "integrate_interval",
    "gram_matrix",
    "verify_orthogonality",
    "verify_orthogonality_block",
    "corollary_sides",
    "corollary_residual",
    "verify_integral_corollary",
    "project_coefficient",
    "norm_growth_bound",
]
