from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from bfcalc import functions as fn
from bfcalc import jfunctional as jf
from bfcalc import measures as ms
from bfcalc.calculus import exp_of_bf
from bfcalc.errors import PreconditionFailed, UndecidedDivergence, Violation

PSIS = fn.default_psis()
TOL = 1e-10


def test_j_value_examples():
    # [TRIVIAL] int e^{-s} ds
    assert jf.j_value(fn.exp_cm(1.0), fn.affine(0.0, 1.0)) == pytest.approx(1.0, abs=1e-9)
    # [PAPER] J[e^{-t psi}, psi] for bounded_exp, t = 1
    g = exp_of_bf(fn.bounded_exp(1.0, 1.0), 1.0)
    assert jf.j_value(g, fn.bounded_exp(1.0, 1.0)) == pytest.approx(1 - math.exp(-1), abs=1e-9)
    # [DERIVED] Gamma integral sqrt(pi/4)/2
    val = jf.j_value(fn.exp_cm(4.0), fn.power(0.5))
    assert val == pytest.approx(0.5 * math.sqrt(math.pi / 4), abs=1e-9)
    assert val == pytest.approx(0.443113, abs=1e-6)


def test_j_value_degenerate_cases():
    # [TRIVIAL] psi' = 0 or g = 0
    assert jf.j_value(fn.exp_cm(1.0), fn.constant(3.0)) == 0.0
    assert jf.j_value(fn.zero_cm(), fn.log1p()) == 0.0


def test_j_value_divergence_certificates():
    # g = 1 with psi(inf) = inf: the atom of nu at 0 forces divergence
    res = jf.j_value_detailed(fn.one_cm(), fn.log1p())
    assert math.isinf(res.value) and res.certificate
    # (1 + s)^{-1} against psi' = 1 diverges like log
    res = jf.j_value_detailed(fn.gamma_cm(1.0), fn.affine(1.0, 1.0))
    assert math.isinf(res.value) and "nondecreasing" in res.certificate


def test_j_value_near_critical_decay():
    # [DERIVED] int (1+s)^{-t} s^{-1/2}/2 ds = B(1/2, t - 1/2)/2, integrand ~ s^{-1-(t-1/2)}
    for t in (0.51, 0.5001):
        expect = 0.5 * math.exp(math.lgamma(0.5) + math.lgamma(t - 0.5) - math.lgamma(t))
        assert jf.j_value(fn.gamma_cm(t), fn.power(0.5)) == pytest.approx(expect, rel=1e-9)


def test_j_value_undecided():
    # 1/((1+s) log(e+s)) against psi' = 1 diverges like log log s: no minorant c/s
    # exists, so neither an integral nor a certificate can be produced
    g = fn.CompletelyMonotoneFunction(
        None, fn.ClosedForm(lambda z: 1.0 / ((1.0 + z) * np.log(math.e + z))),
        "slow", zero_plus=1.0, at_infinity=0.0)
    with pytest.raises(UndecidedDivergence):
        jf.j_value(g, fn.affine(0.0, 1.0), 1e-10)


@pytest.mark.parametrize("psi", PSIS, ids=[p.name for p in PSIS])
@pytest.mark.parametrize("t", [0.1, 1.0, 10.0])
def test_closed_form_identity(psi, t):
    # [PAPER] t^{-1}(e^{-t psi(0)} - e^{-t psi(inf)})
    g = exp_of_bf(psi, t)
    assert abs(jf.j_value(g, psi, TOL) - jf.j_closed_form_exp(psi, t)) <= 2 * TOL + 1e-12
    assert jf.j_closed_form_exp(psi, t) <= 1.0 / t


def test_closed_form_examples():
    # [PAPER] psi = tau, t = 2
    assert jf.j_closed_form_exp(fn.affine(0.0, 1.0), 2.0) == 0.5
    # [TRIVIAL] constant psi
    assert jf.j_closed_form_exp(fn.constant(2.0), 3.0) == 0.0
    # [PAPER] bounded_exp, t = 1
    assert jf.j_closed_form_exp(fn.bounded_exp(1.0, 1.0), 1.0) == pytest.approx(1 - math.exp(-1))
    with pytest.raises(ValueError):
        jf.j_closed_form_exp(fn.log1p(), 0.0)


@pytest.mark.parametrize("psi", PSIS, ids=[p.name for p in PSIS])
def test_bound_via_q(psi):
    # [PAPER] q(s) = e^{-s} bounds J[e^{-psi}, psi] by 1
    g = exp_of_bf(psi, 1.0)
    bound = jf.j_bound_via_q(g, psi, lambda u: np.exp(-np.asarray(u)))
    assert bound == pytest.approx(1.0, abs=1e-9)
    assert jf.j_value(g, psi) <= bound + TOL


def test_bound_via_q_examples():
    # [DERIVED] e^{-s} <= e^{-log(1+s)} = 1/(1+s) on the grid
    assert jf.j_bound_via_q(fn.exp_cm(1.0), fn.log1p(), lambda u: np.exp(-np.asarray(u))) == \
        pytest.approx(1.0, abs=1e-9)
    # [TRIVIAL] g = 0
    assert jf.j_bound_via_q(fn.zero_cm(), fn.log1p(), lambda u: np.exp(-np.asarray(u))) == \
        pytest.approx(1.0, abs=1e-9)
    # g = 1 is not below e^{-psi}
    with pytest.raises(Violation):
        jf.j_bound_via_q(fn.one_cm(), fn.log1p(), lambda u: np.exp(-np.asarray(u)))


def test_bound_via_f_examples():
    # [DERIVED] equality case: tau <= -log(e^{-tau}), int_0^1 -log s ds = 1
    bound = jf.j_bound_via_f(fn.exp_cm(1.0), fn.affine(0.0, 1.0), lambda x: -np.log(x))
    assert bound == pytest.approx(1.0, abs=1e-9)
    assert jf.j_value(fn.exp_cm(1.0), fn.affine(0.0, 1.0)) <= bound + TOL
    # [TRIVIAL] g(0+) = 2
    g2 = fn.CompletelyMonotoneFunction(ms.atom(1.0, 2.0), name="2exp")
    with pytest.raises(PreconditionFailed):
        jf.j_bound_via_f(g2, fn.log1p(), lambda x: -np.log(x))
    # [TRIVIAL] psi = 0 with f = 0
    zero = fn.constant(0.0)
    assert jf.j_bound_via_f(fn.exp_cm(1.0), zero, lambda x: np.zeros_like(x)) == 0.0
    assert jf.j_value(fn.exp_cm(1.0), zero) == 0.0
    with pytest.raises(PreconditionFailed):
        jf.j_bound_via_f(fn.one_cm(), fn.log1p(), lambda x: -np.log(x))
    with pytest.raises(Violation):
        jf.j_bound_via_f(fn.exp_cm(1.0), fn.affine(0.0, 2.0), lambda x: -np.log(x))


def test_power_constant_variants():
    # [PAPER] stated constant at alpha = 1 equals 1 + 1/e, and the corrected one agrees there
    assert jf.power_constant(1.0) == pytest.approx(1 + 1 / math.e)
    assert jf.power_constant(1.0, "corrected") == pytest.approx(1 + 1 / math.e, abs=1e-14)
    # [DERIVED] for alpha < 1 the corrected constant is larger
    assert jf.power_constant(0.5, "corrected") > jf.power_constant(0.5)
    with pytest.raises(ValueError):
        jf.power_constant(1.5)
    with pytest.raises(ValueError):
        jf.power_constant(0.5, "other")


def test_power_bound_examples():
    # [DERIVED] alpha = 1, psi = tau, t = 1: bound 1 + 1/e, J = 1
    b = jf.j_bound_power(fn.affine(0.0, 1.0), 1.0, 1.0)
    assert b == pytest.approx(1.3679, abs=1e-4)
    assert jf.j_value(fn.exp_cm(1.0), fn.affine(0.0, 1.0)) <= b
    # [DERIVED] alpha = 1/2, log1p, t = 1: (1 + 2/e) log 2
    b = jf.j_bound_power(fn.log1p(), 0.5, 1.0)
    assert b == pytest.approx(1.2031, abs=1e-4)
    g = exp_of_bf(fn.power(0.5), 1.0)
    assert jf.j_value(g, fn.log1p()) <= b
    # [TRIVIAL] constant psi: bound covers J = 0
    assert jf.j_bound_power(fn.constant(2.0), 0.5, 1.0, "corrected") == 0.0


@pytest.mark.parametrize("alpha", [0.25, 0.5, 0.75, 1.0])
@pytest.mark.parametrize("t", [0.1, 1.0, 10.0])
def test_corrected_power_bound_dominates(alpha, t):
    g = exp_of_bf(fn.power(alpha), t)
    for psi in PSIS:
        assert jf.j_value(g, psi, TOL) <= jf.j_bound_power(psi, alpha, t, "corrected") + TOL


def test_stated_power_constant_counterexample():
    # [DERIVED] psi = tau, alpha = 1/2: J = t^{-2} Gamma(3) = 2/t^2 exceeds (1 + 2/e)/t^2
    t = 1.0
    g = exp_of_bf(fn.power(0.5), t)
    J = jf.j_value(g, fn.affine(0.0, 1.0))
    assert J == pytest.approx(2.0, abs=1e-8)
    assert J > jf.j_bound_power(fn.affine(0.0, 1.0), 0.5, t, "stated")
    assert J <= jf.j_bound_power(fn.affine(0.0, 1.0), 0.5, t, "corrected") + TOL


def test_linear_bound_examples():
    # [DERIVED] 0.443113 <= 1/2
    assert jf.j_bound_linear(fn.power(0.5), 4.0) == pytest.approx(0.5)
    # [TRIVIAL] psi = tau is the equality case
    assert jf.j_value(fn.exp_cm(3.0), fn.affine(0.0, 1.0)) == pytest.approx(
        jf.j_bound_linear(fn.affine(0.0, 1.0), 3.0), abs=1e-9)
    # [DERIVED] int e^{-2s} ds = 1/2 <= 1 - e^{-1}
    psi = fn.bounded_exp(1.0, 1.0)
    assert jf.j_value(fn.exp_cm(1.0), psi) == pytest.approx(0.5, abs=1e-9)
    assert jf.j_bound_linear(psi, 1.0) == pytest.approx(1 - math.exp(-1))


@given(i=st.integers(0, len(PSIS) - 1), t=st.floats(1e-2, 1e2))
def test_linear_bound_sharp_property(i, t):
    psi = PSIS[i]
    assert jf.j_value(fn.exp_cm(t), psi, TOL) <= jf.j_bound_linear(psi, t, sharp=True) + TOL


def test_bounded_psi_examples():
    # [DERIVED] 1 + e^{-1}
    psi = fn.bounded_exp(1.0, 1.0)
    c = jf.bounded_psi_constant(psi, fn.affine(0.0, 1.0))
    assert c == pytest.approx(1 + math.exp(-1), abs=1e-12)
    assert jf.j_value(fn.exp_cm(1.0), psi) <= jf.j_bound_bounded_psi(psi, fn.affine(0.0, 1.0), 1.0)
    # [DERIVED] [2 + 0.5] / 10
    b = jf.j_bound_bounded_psi(fn.rational(), fn.power(0.5), 10.0)
    assert b == pytest.approx(0.25, abs=1e-10)
    assert jf.j_value(exp_of_bf(fn.power(0.5), 10.0), fn.rational()) <= b
    assert jf.j_bound_bounded_psi(fn.rational(), fn.power(0.5), 10.0, crude=True) == \
        pytest.approx(1.0, abs=1e-9)


def test_bounded_psi_scaling():
    # [DERIVED] t J stays below the constant
    psi, phi = fn.rational(), fn.log1p()
    c = jf.bounded_psi_constant(psi, phi)
    for t in (1.0, 10.0, 100.0):
        assert t * jf.j_value(exp_of_bf(phi, t), psi) <= c + 1e-8


def test_bounded_psi_preconditions():
    with pytest.raises(PreconditionFailed):
        jf.bounded_psi_constant(fn.log1p(), fn.affine(0.0, 1.0))
    with pytest.raises(PreconditionFailed):
        jf.bounded_psi_constant(fn.constant(1.0), fn.affine(0.0, 1.0))
    with pytest.raises(PreconditionFailed):
        jf.bounded_psi_constant(fn.rational(), fn.constant(1.0))


def test_c_constant_examples():
    # [TRIVIAL] b c0
    assert jf.c_constant(3.0, fn.affine(0.0, 1.0)) == pytest.approx(3.0)
    # [PAPER] C[0; psi] = 0
    for psi in PSIS:
        assert jf.c_constant(0.0, psi) == 0.0
    # [DERIVED] both closed forms give 1/2
    direct, triple = jf.c_constant_paths(1.0, fn.bounded_exp(1.0, 1.0))
    assert direct == pytest.approx(0.5, abs=1e-10) and triple == pytest.approx(0.5, abs=1e-12)


@pytest.mark.parametrize("psi", PSIS, ids=[p.name for p in PSIS])
@pytest.mark.parametrize("c0", [0.1, 1.0, 10.0])
def test_c_constant_paths_agree(psi, c0):
    direct, triple = jf.c_constant_paths(c0, psi, TOL)
    assert abs(direct - triple) <= 2 * TOL


def test_monotone_in_g():
    # e^{-2s} <= e^{-s} <= (1+s)^{-1} pointwise on (0, inf)
    gs = [fn.exp_cm(2.0), fn.exp_cm(1.0), fn.gamma_cm(1.0)]
    grid = fn.log_grid()
    for a, b in zip(gs, gs[1:]):
        assert np.all(a.values(grid) <= b.values(grid))
    for psi in (fn.power(0.5), fn.rational(), fn.bounded_exp(2.0, 1.0)):
        vals = [jf.j_value(g, psi, TOL) for g in gs]
        assert all(x <= y + 2 * TOL for x, y in zip(vals, vals[1:]))


def test_psi_inverse():
    # [TRIVIAL] inverses of the closed forms
    u = np.array([0.1, 0.5, 2.0])
    assert np.allclose(jf.psi_inverse(fn.power(0.5), u), u**2, rtol=1e-12)
    assert np.allclose(jf.psi_inverse(fn.log1p(), u), np.expm1(u), rtol=1e-12)
    out = jf.psi_inverse(fn.rational(), np.array([0.0, 0.5, 1.0, 2.0]))
    assert out[0] == 0.0 and out[1] == pytest.approx(1.0) and np.isinf(out[2:]).all()


@pytest.mark.parametrize("psi", PSIS, ids=[p.name for p in PSIS])
def test_reconstructed_q_integrates_to_j(psi):
    for g in (fn.exp_cm(1.0), exp_of_bf(psi, 2.0)):
        J = jf.j_value(g, psi, TOL)
        if not math.isfinite(J):
            continue
        assert jf.integrate_reconstructed_q(g, psi, TOL) == pytest.approx(J, abs=5e-8)
