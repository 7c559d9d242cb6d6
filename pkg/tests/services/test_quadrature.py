"""Tests for weights, norms, quadrature rules and the integral corollaries."""

from __future__ import annotations

import math

import numpy as np
import pytest
from scipy import special

from rogers_engine.core.exceptions import DomainViolation, NonConvergent
from rogers_engine.core.identities import COROLLARY_CATALOG, CorollaryId, IdentityId, PolyFamily
from rogers_engine.core.models import CoeffRequest, WeightSpec
from rogers_engine.services.expansions import coefficient
from rogers_engine.services.qcore import qpoch_infinite
import rogers_engine.services.quadrature as quadrature_module
from rogers_engine.services.quadrature import (
    corollary_residual,
    corollary_sides,
    fit_growth_exponent,
    gauss_jacobi,
    gauss_laguerre,
    integrate_interval,
    integrate_many,
    norm_growth_bound,
    poly_norm,
    project_coefficient,
    quadrature_rule,
    verify_integral_corollary,
    verify_orthogonality,
    verify_orthogonality_block,
    weight_eval,
    weight_values,
)
from rogers_engine.services.suites import ORTHOGONALITY_WEIGHTS


def test_gauss_jacobi_matches_scipy():
    """Golub-Welsch nodes and weights agree with scipy's Gauss-Jacobi rule."""
    nodes, weights = gauss_jacobi(12, 0.3, -0.2)
    ref_nodes, ref_weights = special.roots_jacobi(12, 0.3, -0.2)
    np.testing.assert_allclose(np.sort(nodes), np.sort(ref_nodes), rtol=1e-12, atol=1e-14)
    np.testing.assert_allclose(weights[np.argsort(nodes)], ref_weights[np.argsort(ref_nodes)], rtol=1e-10)


def test_gauss_jacobi_total_mass():
    """The weights sum to ``int (1-x)^a (1+x)^b dx``."""
    a, b = 0.5, 1.5
    _, weights = gauss_jacobi(8, a, b)
    mass = 2.0 ** (a + b + 1.0) * special.beta(a + 1.0, b + 1.0)
    assert weights.sum() == pytest.approx(mass, rel=1e-13)


def test_gauss_laguerre_matches_scipy():
    """Generalized Gauss-Laguerre agrees with scipy."""
    nodes, weights = gauss_laguerre(10, 0.5)
    ref_nodes, ref_weights = special.roots_genlaguerre(10, 0.5)
    order = np.argsort(nodes)
    np.testing.assert_allclose(nodes[order], np.sort(ref_nodes), rtol=1e-12)
    np.testing.assert_allclose(weights[order], ref_weights[np.argsort(ref_nodes)], rtol=1e-9)


def test_gauss_rules_reject_nonintegrable_exponents():
    """Exponents at or below -1 are not integrable."""
    with pytest.raises(DomainViolation):
        gauss_jacobi(8, -1.0, 0.0)
    with pytest.raises(DomainViolation):
        gauss_laguerre(8, -1.5)


def test_q_rules_take_no_endpoint_exponent():
    """q-family rules integrate in ``theta`` and cannot absorb ``(1-x)^{-nu}``."""
    with pytest.raises(DomainViolation):
        quadrature_rule(WeightSpec(PolyFamily.CQ_HERMITE, (), 0.5), 16, shift=0.2)


def test_integrate_interval_polynomial_moment():
    """``int_{-1}^{1} x^2 dx = 2/3`` under the Legendre weight."""
    result = integrate_interval(lambda x: x**2, WeightSpec(PolyFamily.LEGENDRE))
    assert result.value == pytest.approx(2.0 / 3.0, rel=1e-13)
    assert result.nodes_used >= 32


def test_integrate_many_keeps_leading_axes():
    """Array-valued integrands return one integral per leading entry."""
    totals, used, _, _ = integrate_many(
        lambda x: np.stack([np.ones_like(x), x, x * x]), WeightSpec(PolyFamily.CHEBYSHEV_T)
    )
    np.testing.assert_allclose(totals.real, [math.pi, 0.0, math.pi / 2.0], atol=1e-13)
    assert used >= 32


def test_cq_hermite_mass():
    """The q-Hermite weight has mass ``2 pi / (q;q)_inf`` in the ``theta`` measure."""
    q = 0.5
    result = integrate_interval(lambda x: np.ones_like(x), WeightSpec(PolyFamily.CQ_HERMITE, (), q))
    expected = 2.0 * math.pi / qpoch_infinite(q, q).value.real
    assert result.value == pytest.approx(expected, rel=1e-10)
    assert poly_norm(WeightSpec(PolyFamily.CQ_HERMITE, (), q), 0) == pytest.approx(expected, rel=1e-12)


def test_weight_domains():
    """Weights refuse points outside their support."""
    with pytest.raises(DomainViolation):
        weight_values(WeightSpec(PolyFamily.JACOBI, (0.3, 0.7)), [1.5])
    with pytest.raises(DomainViolation):
        weight_values(WeightSpec(PolyFamily.LAGUERRE, (0.5,)), [-0.1])
    with pytest.raises(DomainViolation):
        weight_values(WeightSpec(PolyFamily.CQ_ULTRASPHERICAL, (0.4,), 0.5), [1.2])
    assert weight_eval(WeightSpec(PolyFamily.LEGENDRE), 0.3) == pytest.approx(1.0)
    assert weight_eval(WeightSpec(PolyFamily.WILSON, (1.0, 1.5, 0.5, 2.0)), 0.0) == 0.0


def test_classical_norms():
    """Closed-form squared norms of the classical families."""
    assert poly_norm(WeightSpec(PolyFamily.LEGENDRE), 3) == pytest.approx(2.0 / 7.0)
    assert poly_norm(WeightSpec(PolyFamily.CHEBYSHEV_T), 0) == pytest.approx(math.pi)
    assert poly_norm(WeightSpec(PolyFamily.CHEBYSHEV_T), 4) == pytest.approx(math.pi / 2.0)
    assert poly_norm(WeightSpec(PolyFamily.LAGUERRE, (0.5,)), 2) == pytest.approx(special.gamma(3.5) / 2.0)


@pytest.mark.slow
@pytest.mark.parametrize("w", ORTHOGONALITY_WEIGHTS, ids=lambda w: w.family.value)
def test_orthogonality_blocks(w):
    """Gram matrices are diagonal with the displayed norms."""
    off, norms = verify_orthogonality_block(w, 5)
    assert off.id == f"orthogonality:{w.family.value}:off_diagonal"
    assert off.passed, off.worst_point
    assert norms.passed, norms.worst_point


def test_single_orthogonality_entry():
    """One Gram entry is checked against zero or the norm."""
    w = WeightSpec(PolyFamily.JACOBI, (0.3, 0.7))
    assert verify_orthogonality(w, 2, 5).passed
    diagonal = verify_orthogonality(w, 4, 4)
    assert diagonal.passed
    assert diagonal.tol_rel == 1e-8


def test_orthogonality_degree_cap():
    """Orthogonality checks stop at degree twelve."""
    with pytest.raises(DomainViolation):
        verify_orthogonality(WeightSpec(PolyFamily.LEGENDRE), 13, 0)
    with pytest.raises(DomainViolation):
        verify_orthogonality_block(WeightSpec(PolyFamily.LEGENDRE), 13)


def test_orthogonality_nonconvergence_is_reported(monkeypatch):
    """A Gram matrix that does not converge fails both block reports."""

    def stalled(w, n_max):
        raise NonConvergent("node doubling stalled")

    monkeypatch.setattr(quadrature_module, "gram_matrix", stalled)
    reports = verify_orthogonality_block(WeightSpec(PolyFamily.LEGENDRE), 3)
    assert [r.converged_fraction for r in reports] == [0.0, 0.0]
    assert not any(r.passed for r in reports)
    assert not verify_orthogonality(WeightSpec(PolyFamily.LEGENDRE), 1, 2).passed


@pytest.mark.slow
@pytest.mark.parametrize("cor", list(CorollaryId), ids=lambda c: c.value)
def test_integral_corollaries_at_defaults(cor):
    """Quadrature of each corollary matches its closed form at the catalogued defaults."""
    descriptor = COROLLARY_CATALOG[cor]
    q = 0.5 if descriptor.q_required else None
    report = verify_integral_corollary(cor, dict(descriptor.defaults), n_max=4, q=q)
    assert report.id == f"integral:{cor.value}"
    assert report.passed, report.worst_point


def test_one_minus_x_at_zero_exponent_is_orthogonality():
    """With ``nu = 0`` the Jacobi corollary is ``int P_2 w = 0``."""
    integral, closed = corollary_sides("jacobi_1mx", 2, {"alpha": 0.5, "beta": 0.5, "nu": 0.0})
    assert closed == 0
    assert abs(integral.value) < 1e-12


def test_corollary_validation():
    """Corollaries check parameters, base and integrability."""
    with pytest.raises(DomainViolation):
        corollary_sides("cheby_1mx", 1, {})
    with pytest.raises(DomainViolation):
        corollary_sides("cheby_1mx", 1, {"nu": 0.6})
    with pytest.raises(DomainViolation):
        corollary_sides("cqultra", 1, {"beta": 0.3, "gamma": 0.5, "t": 0.25})
    with pytest.raises(DomainViolation):
        corollary_sides("gegen_stieltjes", 1, {"mu": 0.0, "lambda": 0.4, "t": 0.25})


@pytest.mark.parametrize(
    ("cor", "params", "q"),
    [
        ("gegen_stieltjes", {"mu": 0.7, "lambda": 0.4, "t": 0.1}, None),
        ("cqultra", {"beta": 0.3, "gamma": 0.5, "t": 0.1}, 0.5),
    ],
)
def test_corollary_small_closed_form_at_high_degree(cor, params, q):
    """At ``t = 0.1, n = 8`` the closed form is of size ``t^8`` and quadrature still matches it."""
    integral, closed = corollary_sides(cor, 8, params, q)
    assert corollary_residual(integral, closed) < 1e-8


def test_corollary_nonconvergence_lowers_converged_fraction(monkeypatch):
    """A degree whose quadrature does not converge is counted, not raised."""
    real = quadrature_module.corollary_sides

    def flaky(cor, n, params, q=None, pol=None):
        if n == 1:
            raise NonConvergent("node doubling stalled")
        return real(cor, n, params, q, pol)

    monkeypatch.setattr(quadrature_module, "corollary_sides", flaky)
    report = verify_integral_corollary("cheby_1mx", {"nu": 0.2}, n_max=2)
    assert report.samples == 3
    assert report.converged_fraction == pytest.approx(2 / 3)
    assert not report.passed


def test_projection_recovers_power_coefficient():
    """``<(1-x)^-nu, T_n>/||T_n||^2`` equals the closed-form coefficient."""
    params = {"nu": 0.2}
    for n in range(4):
        projected = project_coefficient("cheby_1mx", params, n)
        closed = coefficient(CoeffRequest(IdentityId.CHEBY_1MX, n, params)).value
        assert projected.value == pytest.approx(closed, rel=1e-8, abs=1e-12)


def test_projection_recovers_q_coefficient():
    """Projecting the Rogers gamma left side onto ``C_n(x;gamma|q)`` gives its coefficient."""
    params = {"beta": 0.3, "gamma": 0.6, "t": 0.25}
    for n in range(4):
        projected = project_coefficient("rogers_gamma", params, n, 0.5)
        closed = coefficient(CoeffRequest(IdentityId.ROGERS_GAMMA, n, params, 0.5)).value
        assert projected.value == pytest.approx(closed, rel=1e-8, abs=1e-13)


def test_growth_fit_recovers_power_law():
    """A pure ``(n+1)^2`` sequence fits ``sigma = 2`` and satisfies its bound."""
    values = [(n + 1.0) ** 2 for n in range(40)]
    fit = fit_growth_exponent(values)
    assert fit.sigma == pytest.approx(2.0, abs=1e-9)
    assert fit.excess(np.arange(40, 80), [(n + 1.0) ** 2 for n in range(40, 80)]) == 0.0


def test_growth_fit_needs_enough_values():
    """Fits need at least four values and a nonzero first value."""
    with pytest.raises(DomainViolation):
        fit_growth_exponent([1.0, 2.0, 3.0])
    with pytest.raises(DomainViolation):
        fit_growth_exponent([0.0, 1.0, 2.0, 3.0])


def test_norm_growth_bound_for_jacobi():
    """Jacobi norms decay like ``1/n`` and stay below the fitted bound."""
    report = norm_growth_bound(WeightSpec(PolyFamily.JACOBI, (0.3, 0.7)), 20)
    assert report.id == "norm_growth:jacobi"
    assert report.samples == 20
    assert report.passed
    assert report.worst_point["sigma"] == pytest.approx(-1.0, abs=0.1)
