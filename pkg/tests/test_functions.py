from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from bfcalc import functions as fn
from bfcalc import measures as ms
from bfcalc.errors import PreconditionFailed, ToleranceNotMet

CATALOG = fn.default_psis() + [fn.power(0.25), fn.power(0.75), fn.power(1.0),
                               fn.bounded_exp(2.0, 3.0)]
ids = [p.name for p in CATALOG]


def test_eval_examples():
    # [TRIVIAL] sqrt(4) = 2
    assert fn.bf_eval(fn.power(0.5), 4.0) == pytest.approx(2.0, abs=1e-14)
    # [TRIVIAL] single atom gives 1 - e^{-tau}
    psi = fn.from_triple(0.0, 0.0, ms.atom(1.0))
    assert fn.bf_eval(psi, 1.0) == pytest.approx(1.0 - math.exp(-1.0), abs=1e-12)
    # [DERIVED] the stable Levy density reproduces sqrt at z = 1
    assert fn.bf_eval(fn.power(0.5), 1.0, 1e-11, method="triple") == pytest.approx(1.0, abs=1e-9)


def test_derivative_examples():
    # [TRIVIAL] each from its closed form
    assert fn.bf_derivative(fn.affine(0.0, 1.0), 7.0) == pytest.approx(1.0)
    assert fn.bf_derivative(fn.power(0.5), 4.0) == pytest.approx(0.25)
    assert fn.bf_derivative(fn.log1p(), 1.0) == pytest.approx(0.5)
    with pytest.raises(ValueError):
        fn.bf_derivative(fn.log1p(), 0.0)


def test_limits_examples():
    # [TRIVIAL]
    assert fn.bf_limits(fn.bounded_exp(1.0, 1.0)) == (0.0, pytest.approx(1.0), 0.0)
    assert fn.bf_limits(fn.affine(2.0, 3.0)) == (2.0, math.inf, 3.0)
    assert fn.bf_limits(fn.log1p()) == (0.0, math.inf, 0.0)
    assert fn.bf_limits(fn.rational())[1] == pytest.approx(1.0, abs=1e-10)


@pytest.mark.parametrize("psi", CATALOG, ids=ids)
def test_closed_form_matches_triple(psi):
    # [DERIVED] independent triple quadrature on 10^k, k = -4..4
    taus = np.array([10.0**k for k in range(-4, 5)])
    closed = psi.values(taus, method="closed")
    triple = psi.values(taus, 1e-11, method="triple")
    assert np.max(np.abs(closed - triple)) <= 1e-8


@pytest.mark.parametrize("psi", CATALOG, ids=ids)
def test_derivative_matches_finite_difference(psi):
    # [DERIVED] centered differences of the closed form, and the triple derivative
    for tau in (0.1, 1.0, 5.0):
        h = 1e-5 * tau
        fd = (fn.bf_eval(psi, tau + h) - fn.bf_eval(psi, tau - h)) / (2 * h)
        assert fn.bf_derivative(psi, tau) == pytest.approx(fd, abs=1e-5)
        trip = fn.bf_derivative(psi, tau, 1e-11, method="triple")
        assert trip == pytest.approx(fn.bf_derivative(psi, tau), abs=1e-7)


@pytest.mark.parametrize("psi", CATALOG, ids=ids)
def test_bernstein_invariants(psi):
    rep = fn.check_bernstein_invariants(psi)
    assert rep.ok, rep.failures


@pytest.mark.parametrize("psi", CATALOG, ids=ids)
def test_complex_triple_matches_closed_form(psi):
    # [DERIVED] closed forms continue holomorphically to the half plane
    points = [0.3 + 2j, 5.0 - 0.5j, 0.01 + 10j]
    if psi.gamma.pieces == () or psi.gamma.pieces[0].tail.kind != "polynomial":
        points.append(3j)
    for z in points:
        closed = fn.bf_eval(psi, z, method="closed")
        if psi.gamma.is_empty:
            continue
        trip = fn.bf_eval(psi, z, 1e-11, method="triple")
        assert abs(closed - trip) <= 1e-7 * (1 + abs(closed))


def test_imaginary_axis_with_polynomial_tail_is_refused():
    # the undamped oscillatory tail cannot be truncated with a certificate
    with pytest.raises(ToleranceNotMet):
        fn.bf_eval(fn.power(0.5), 2j, 1e-10, method="triple")
    # the closed form covers the axis
    assert abs(fn.bf_eval(fn.power(0.5), 2j) - np.sqrt(2j)) < 1e-15


def test_eval_rejects_left_half_plane():
    with pytest.raises(ValueError):
        fn.bf_eval(fn.log1p(), -1.0 + 0j)


def test_bounded_iff_zero_drift_and_finite_mass():
    assert fn.bounded_exp().is_bounded and fn.rational().is_bounded
    assert fn.constant(2.0).is_bounded
    assert not fn.log1p().is_bounded and not fn.power(0.5).is_bounded
    assert not fn.affine(0.0, 1.0).is_bounded


def test_levy_triple_validation():
    with pytest.raises(ValueError):
        fn.LevyTriple(-1.0, 0.0)
    with pytest.raises(ValueError):
        fn.LevyTriple(0.0, 0.0, ms.power_density(2.5, 0.0, 1.0))


def test_cm_functions():
    # [TRIVIAL] g(0+) = nu mass and the closed forms
    g = fn.gamma_cm(1.0)
    assert g.g_zero_plus == pytest.approx(1.0, abs=1e-9)
    assert fn.cm_eval(g, 1.0) == pytest.approx(0.5)
    assert fn.cm_eval(g, 1.0, method="measure") == pytest.approx(0.5, abs=1e-9)
    assert fn.exp_cm(2.0)(1.0) == pytest.approx(math.exp(-2.0))
    assert fn.one_cm().g_infinity == 1.0 and fn.zero_cm().is_zero
    # [DERIVED] Laplace transform of e^{-s} at 1 + i
    z = 1.0 + 1.0j
    assert abs(fn.cm_eval(g, z, method="measure") - 1 / (1 + z)) < 1e-9


@pytest.mark.parametrize("g", [fn.exp_cm(1.0), fn.gamma_cm(0.5), fn.gamma_cm(3.0), fn.one_cm()],
                         ids=lambda g: g.name)
def test_cm_sign_alternation(g):
    assert fn.check_completely_monotone(g).ok


def test_alternation_detects_non_cm():
    x = np.geomspace(0.1, 10, 20)
    assert not fn.check_alternating(x, np.sin(x), max_order=3).ok


def test_scaling_law_examples():
    rec = fn.check_scaling_law(fn.power(0.5), 4.0, 1.0)
    # [TRIVIAL]
    assert rec.lhs == pytest.approx(2.0) and rec.rhs == pytest.approx(4.0) and rec.passed
    rec = fn.check_scaling_law(fn.affine(0.0, 1.0), 3.0, 2.5)
    assert rec.lhs == pytest.approx(rec.rhs) and rec.passed
    # [DERIVED] direct evaluation
    rec = fn.check_scaling_law(fn.log1p(), 10.0, 0.1)
    assert rec.lhs == pytest.approx(math.log(2.0)) and rec.rhs == pytest.approx(10 * math.log(1.1))
    assert rec.passed
    with pytest.raises(ValueError):
        fn.check_scaling_law(fn.log1p(), 0.5, 1.0)


@given(i=st.integers(0, len(CATALOG) - 1), c=st.floats(1.0, 1e3), tau=st.floats(1e-4, 1e4))
def test_scaling_law_property(i, c, tau):
    assert fn.check_scaling_law(CATALOG[i], c, tau).passed


def test_half_plane_examples():
    # [TRIVIAL] |i| = 1
    assert fn.check_half_plane_bound(fn.affine(0.0, 1.0), 1j).extra["observed_ratio"] == \
        pytest.approx(1.0)
    # [DERIVED] |1 - e^{-i pi}| / (1 - e^{-pi})
    rec = fn.check_half_plane_bound(fn.bounded_exp(1.0, 1.0), 1j * math.pi)
    assert rec.extra["observed_ratio"] == pytest.approx(2.0 / (1 - math.exp(-math.pi)), rel=1e-12)
    assert rec.extra["observed_ratio"] == pytest.approx(2.0903, abs=1e-4)
    assert rec.passed
    # [TRIVIAL] |sqrt(iy)| = sqrt(y)
    for y in (0.01, 1.0, 100.0):
        rec = fn.check_half_plane_bound(fn.power(0.5), 1j * y)
        assert rec.extra["observed_ratio"] == pytest.approx(1.0)
    assert fn.HALF_PLANE_CONSTANT == pytest.approx(3.163953, abs=1e-6)


@given(i=st.integers(0, len(CATALOG) - 1), r=st.floats(1e-3, 1e3),
       theta=st.floats(-math.pi / 2, math.pi / 2))
def test_half_plane_property(i, r, theta):
    z = complex(r * math.cos(theta), r * math.sin(theta))
    z = complex(max(z.real, 0.0), z.imag)
    rec = fn.check_half_plane_bound(CATALOG[i], z)
    assert rec.passed


def test_sector_example():
    # [DERIVED] |e^{-(1+i)}(1+i)| = sqrt(2)/e and rhs (2/(sigma cos beta)) e^{-1}
    recs = fn.check_sector_product_bound(fn.exp_cm(1.0), fn.affine(0.0, 1.0), math.pi / 4, 1 + 1j)
    assert len(recs) == 1
    assert recs[0].lhs == pytest.approx(math.sqrt(2) / math.e, abs=1e-12)
    assert recs[0].rhs == pytest.approx(1.6460, abs=1e-4)
    assert recs[0].passed


def test_sector_constant_pair():
    # [TRIVIAL] g = 1 and psi = a, the uniform bound with J = 0
    recs = fn.check_sector_product_bound(fn.one_cm(), fn.constant(2.0), 1.0, 1.0 + 0.5j, 0.0)
    assert [r.inequality_id for r in recs] == ["sector_pointwise", "sector_uniform"]
    assert recs[1].lhs == pytest.approx(2.0)
    assert recs[1].rhs == pytest.approx(2 * 2.0 / (fn.SIGMA * math.cos(1.0)))
    assert all(r.passed for r in recs)


def test_sector_rejects_outside_points():
    with pytest.raises(ValueError):
        fn.check_sector_product_bound(fn.one_cm(), fn.log1p(), 0.5, 1j)
    with pytest.raises(ValueError):
        fn.check_sector_product_bound(fn.one_cm(), fn.log1p(), 2.0, 1.0)


@given(i=st.integers(0, len(CATALOG) - 1), beta=st.floats(0.05, 1.5),
       frac=st.floats(-1.0, 1.0), r=st.floats(1e-2, 1e2))
def test_sector_property_real_and_complex(i, beta, frac, r):
    z = r * complex(math.cos(frac * beta), math.sin(frac * beta))
    for g in (fn.exp_cm(1.0), fn.gamma_cm(1.0)):
        assert all(rec.passed for rec in fn.check_sector_product_bound(g, CATALOG[i], beta, z))


def test_one_minus_derivative_fixed_point():
    # [TRIVIAL] phi' = e^{-tau}
    psi = fn.one_minus_derivative_bf(fn.bounded_exp(1.0, 1.0))
    for tau in (0.1, 1.0, 5.0):
        assert fn.bf_eval(psi, tau) == pytest.approx(1 - math.exp(-tau), abs=1e-12)
        assert fn.bf_eval(psi, tau, 1e-11, method="triple") == pytest.approx(
            1 - math.exp(-tau), abs=1e-10)


def test_one_minus_derivative_rational():
    # [DERIVED] differentiate tau/(1+tau): psi = 1 - (1+tau)^{-2}, psi'(0+) = 2
    psi = fn.one_minus_derivative_bf(fn.rational())
    for tau in (0.01, 0.5, 3.0, 40.0):
        expect = 1 - (1 + tau) ** -2
        assert fn.bf_eval(psi, tau) == pytest.approx(expect, abs=1e-12)
        assert fn.bf_eval(psi, tau, 1e-11, method="triple") == pytest.approx(expect, abs=1e-9)
    assert psi.derivative_at_zero == pytest.approx(2.0, abs=1e-9)
    assert psi.a == 0.0 and psi.psi_infinity == pytest.approx(1.0, abs=1e-9)
    assert fn.check_bernstein_invariants(psi).ok


def test_one_minus_derivative_degenerate_and_refused():
    # [TRIVIAL] phi = tau gives psi = 0
    psi = fn.one_minus_derivative_bf(fn.affine(0.0, 1.0))
    assert psi.is_constant and fn.bf_eval(psi, 3.0) == 0.0
    with pytest.raises(PreconditionFailed):
        fn.one_minus_derivative_bf(fn.bounded_exp(2.0, 1.0))
    with pytest.raises(PreconditionFailed):
        fn.one_minus_derivative_bf(fn.power(0.5))


def test_one_minus_derivative_log1p_is_rational():
    # [TRIVIAL] 1 - 1/(1+tau) = tau/(1+tau)
    psi = fn.one_minus_derivative_bf(fn.log1p())
    for tau in (0.2, 2.0, 20.0):
        assert fn.bf_eval(psi, tau, 1e-11, method="triple") == pytest.approx(tau / (1 + tau), abs=1e-9)


def test_derivatives_at_zero():
    # [TRIVIAL] closed forms at 0, infinite for sqrt
    assert fn.log1p().derivative_at_zero == 1.0
    assert fn.rational().second_derivative_at_zero == pytest.approx(-2.0)
    assert math.isinf(fn.power(0.5).derivative_at_zero)
    assert fn.bounded_exp(2.0, 3.0).derivative_at_zero == pytest.approx(6.0)
