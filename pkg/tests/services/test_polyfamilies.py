"""Tests for the orthogonal polynomial families and special functions."""

from __future__ import annotations

import cmath
import math

import mpmath
import numpy as np
import pytest
from scipy import special

from rogers_engine.core.exceptions import (
    BranchDomain,
    DomainViolation,
    IntegerAlphaUnsupported,
    ParameterDomain,
)
from rogers_engine.core.identities import PolyFamily
from rogers_engine.core.models import PolySpec
from rogers_engine.services.polyfamilies import (
    askey_wilson_map,
    family_spec,
    gamma_ratio_asymptote,
    jacobi_fn_first,
    jacobi_fn_second,
    jacobi_fn_second_decaying,
    legendre_q2,
    poly_eval,
    poly_eval_recurrence,
    poly_sequence,
    poly_values,
    unit_exponential,
    wilson_eval,
)
from rogers_engine.services.qcore import qpoch_finite

X_GRID = np.cos(np.linspace(0.1, 3.0, 9))


@pytest.mark.parametrize("n", [0, 1, 4, 11])
def test_classical_families_match_scipy(n):
    """Jacobi, Gegenbauer, Chebyshev, Legendre and Laguerre agree with scipy."""
    cases = [
        (family_spec("jacobi", (0.4, -0.3)), special.eval_jacobi(n, 0.4, -0.3, X_GRID)),
        (family_spec("gegenbauer", (0.7,)), special.eval_gegenbauer(n, 0.7, X_GRID)),
        (family_spec("chebyshev_t"), special.eval_chebyt(n, X_GRID)),
        (family_spec("legendre"), special.eval_legendre(n, X_GRID)),
        (family_spec("laguerre", (0.5,)), special.eval_genlaguerre(n, 0.5, 3.0 * (X_GRID + 1.0))),
    ]
    for spec, expected in cases:
        x = 3.0 * (X_GRID + 1.0) if spec.family is PolyFamily.LAGUERRE else X_GRID
        got = poly_values(spec, n, x)
        np.testing.assert_allclose(got.real, expected, rtol=1e-10, atol=1e-12)
        np.testing.assert_allclose(got.imag, 0.0, atol=1e-12)


def test_chebyshev_is_cosine():
    """``T_5(cos 1.5) = cos 7.5``."""
    assert poly_eval(family_spec("chebyshev_t"), 5, math.cos(1.5)) == pytest.approx(math.cos(7.5), abs=1e-14)


@pytest.mark.parametrize(
    "spec",
    [
        family_spec("askey_wilson", (0.1, 0.2, 0.3, 0.4), 0.5),
        family_spec("cq_jacobi", (0.5, 0.2), 0.5),
        family_spec("cq_ultraspherical", (0.4,), 0.6),
        family_spec("cq_hermite", (), 0.7),
        family_spec("cq_legendre", (), 0.5),
        family_spec("wilson", (1.0, 1.5, 0.5, 2.0)),
        family_spec("jacobi", (0.4, -0.3)),
    ],
    ids=lambda s: s.family.value,
)
def test_series_and_recurrence_agree(spec):
    """The automatic path and the three-term recurrence give the same values."""
    x = np.linspace(0.5, 4.0, 5) if spec.family is PolyFamily.WILSON else X_GRID
    for n in (1, 3, 7):
        direct = poly_values(spec, n, x)
        recurrence = poly_values(spec, n, x, method="recurrence")
        np.testing.assert_allclose(direct, recurrence, rtol=1e-9, atol=1e-11)


def test_poly_sequence_rows_match_single_degrees():
    """Row ``n`` of a sequence is the degree-``n`` polynomial."""
    spec = family_spec("gegenbauer", (1.3,))
    rows = poly_sequence(spec, 6, X_GRID)
    assert rows.shape == (7, X_GRID.size)
    for n in range(7):
        np.testing.assert_allclose(rows[n].real, special.eval_gegenbauer(n, 1.3, X_GRID), rtol=1e-11, atol=1e-13)


def test_negative_degree_is_rejected():
    """Degrees are nonnegative."""
    with pytest.raises(DomainViolation):
        poly_values(family_spec("legendre"), -1, X_GRID)


def test_askey_wilson_is_symmetric_in_parameters():
    """``p_n`` does not depend on the order of its four parameters."""
    base = poly_values(family_spec("askey_wilson", (0.1, 0.2, 0.3, 0.4), 0.5), 5, X_GRID)
    swapped = poly_values(family_spec("askey_wilson", (0.4, 0.3, 0.1, 0.2), 0.5), 5, X_GRID)
    np.testing.assert_allclose(base, swapped, rtol=1e-11, atol=1e-13)


def test_askey_wilson_rejects_all_zero_parameters():
    """At least one Askey-Wilson parameter must be nonzero."""
    with pytest.raises(ParameterDomain):
        poly_eval(family_spec("askey_wilson", (0.0, 0.0, 0.0, 0.0), 0.5), 2, 0.3, method="series")


def test_cq_ultraspherical_at_beta_q_is_chebyshev_u():
    """``C_n(x;q|q) = U_n(x)``."""
    q = 0.45
    for n in range(6):
        got = poly_values(family_spec("cq_ultraspherical", (q,), q), n, X_GRID)
        np.testing.assert_allclose(got.real, special.eval_chebyu(n, X_GRID), rtol=1e-11, atol=1e-12)


def test_cq_ultraspherical_at_beta_zero_is_scaled_hermite():
    """``C_n(x;0|q) = H_n(x|q)/(q;q)_n``."""
    q = 0.6
    for n in range(6):
        ultra = poly_values(family_spec("cq_ultraspherical", (0.0,), q), n, X_GRID)
        hermite = poly_values(family_spec("cq_hermite", (), q), n, X_GRID)
        np.testing.assert_allclose(ultra, hermite / qpoch_finite(q, q, n), rtol=1e-11, atol=1e-12)


def test_cq_ultraspherical_is_a_special_askey_wilson():
    """``C_n(x;beta|q)`` is a scaled ``p_n`` at ``(sqrt b, -sqrt b, sqrt(qb), -sqrt(qb))``."""
    beta, q, n = 0.4, 0.5, 3
    rb, rqb = math.sqrt(beta), math.sqrt(q * beta)
    aw = poly_values(family_spec("askey_wilson", (rb, -rb, rqb, -rqb), q), n, X_GRID)
    scale = qpoch_finite(beta * beta, q, n) / (
        qpoch_finite(q, q, n) * qpoch_finite(-beta, q, n)
        * qpoch_finite(math.sqrt(q) * beta, q, n) * qpoch_finite(-math.sqrt(q) * beta, q, n)
    )
    ultra = poly_values(family_spec("cq_ultraspherical", (beta,), q), n, X_GRID)
    np.testing.assert_allclose(ultra, scale * aw, rtol=1e-10, atol=1e-12)


def test_askey_wilson_map_shape():
    """The continuous q-Jacobi map produces four parameters with the expected products."""
    a, b, c, d = askey_wilson_map(0.5, 0.2, 0.5)
    assert a * d == pytest.approx(0.5 * math.sqrt(0.5))
    assert b * c == pytest.approx(0.2 * math.sqrt(0.5))


def test_unit_exponential_on_and_off_the_interval():
    """On ``[-1, 1]`` the map lands on the unit circle; outside it has modulus above one."""
    w = unit_exponential(np.array([0.3, -0.9]))
    np.testing.assert_allclose(np.abs(w), 1.0, rtol=1e-15)
    np.testing.assert_allclose(w.real, [0.3, -0.9], rtol=1e-15)
    outside = unit_exponential(np.array([1.5, -2.0]))
    assert np.all(np.abs(outside) > 1.0)
    np.testing.assert_allclose((outside + 1.0 / outside) / 2.0, [1.5, -2.0], rtol=1e-14)


@pytest.mark.parametrize("n, x2", [(0, 2.0), (2, 0.7), (4, 3.1), (3, -0.5)])
def test_wilson_matches_mpmath_4f3(n, x2):
    """Wilson polynomials agree with their terminating 4F3 evaluated in mpmath."""
    a, b, c, d = 1.0, 1.5, 0.5, 2.0
    x = mpmath.sqrt(x2)
    expected = (
        mpmath.rf(a + b, n) * mpmath.rf(a + c, n) * mpmath.rf(a + d, n)
        * mpmath.hyper([-n, n + a + b + c + d - 1, a + 1j * x, a - 1j * x], [a + b, a + c, a + d], 1)
    )
    assert wilson_eval(n, x2, (a, b, c, d)) == pytest.approx(complex(expected), rel=1e-11, abs=1e-12)


def test_wilson_eval_needs_four_parameters():
    """Wilson polynomials take exactly four parameters."""
    with pytest.raises(ParameterDomain):
        wilson_eval(2, 1.0, (1.0, 1.0))


def test_legendre_q2_degree_zero():
    """``Q_0(z) = log((z+1)/(z-1))/2``."""
    for z in (1.5, 2.0, 5.0):
        assert legendre_q2(0.0, 0.0, z) == pytest.approx(0.5 * math.log((z + 1) / (z - 1)), rel=1e-12)


@pytest.mark.parametrize("nu, mu, z", [(0.5, 0.3, 2.0), (1.7, -0.4, 3.5), (0.2, 0.6, 1.2)])
def test_legendre_q2_matches_mpmath(nu, mu, z):
    """The second-kind Legendre function agrees with mpmath's type-3 definition."""
    expected = complex(mpmath.legenq(nu, mu, z, type=3))
    assert legendre_q2(nu, mu, z) == pytest.approx(expected, rel=1e-10)


def test_legendre_q2_rejects_the_cut():
    """Real arguments at or below one lie on the cut."""
    with pytest.raises(BranchDomain):
        legendre_q2(0.5, 0.0, 0.5)


def test_jacobi_fn_first_reduces_to_polynomial():
    """At integer degree the first-kind function is the Jacobi polynomial."""
    for z in (0.3, 1.7):
        assert jacobi_fn_first(3, 0.4, 0.2, z) == pytest.approx(special.eval_jacobi(3, 0.4, 0.2, z), rel=1e-12)


def test_jacobi_fn_second_forms_agree():
    """The connection form and the decaying 2F1 form give the same function."""
    for gamma, alpha, beta, z in [(2.3, 0.4, 0.2, 1.8), (0.7, -0.3, 0.5, 2.5)]:
        connection = jacobi_fn_second(gamma, alpha, beta, z)
        decaying = jacobi_fn_second_decaying(gamma, alpha, beta, z)
        assert connection == pytest.approx(decaying, rel=1e-9)


def test_jacobi_fn_second_rejects_integer_alpha():
    """The connection form is singular at integer ``alpha``."""
    with pytest.raises(IntegerAlphaUnsupported):
        jacobi_fn_second(1.5, 1.0, 0.2, 2.0)


def test_jacobi_fn_second_decaying_needs_real_z_above_one():
    """The decaying form is only evaluated on ``z > 1``."""
    with pytest.raises(BranchDomain):
        jacobi_fn_second_decaying(1.5, 0.3, 0.2, 0.5)


@pytest.mark.parametrize("sign", [1, -1])
def test_gamma_ratio_asymptote(sign):
    """``Gamma(a + i tau)/Gamma(b + i tau)`` approaches ``e^{i pi (a-b)/2} tau^(a-b)``."""
    previous = math.inf
    for tau in (1e2, 1e3, 1e4):
        ratio, asymptote = gamma_ratio_asymptote(1.5, 0.25, tau, sign)
        err = abs(ratio / asymptote - 1.0)
        assert err < previous
        previous = err
    assert previous < 1e-3
    _, asymptote = gamma_ratio_asymptote(1.5, 0.25, 1e4, sign)
    assert cmath.phase(asymptote) == pytest.approx(sign * 0.5 * math.pi * 1.25, rel=1e-12)


def test_family_spec_validates_arity_and_base():
    """Families check their parameter count and whether they take a base."""
    with pytest.raises(ParameterDomain):
        family_spec("jacobi", (0.5,))
    with pytest.raises(ParameterDomain):
        family_spec("cq_hermite", ())
    with pytest.raises(ParameterDomain):
        PolySpec(PolyFamily.LEGENDRE, (), 0.5)


def test_recurrence_helper_matches_auto_path():
    """The single-point recurrence helper agrees with the automatic path."""
    spec = family_spec("cq_jacobi", (0.5, 0.2), 0.5)
    assert poly_eval_recurrence(spec, 4, 0.3) == pytest.approx(poly_eval(spec, 4, 0.3), rel=1e-10)
