from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from bfcalc import measures as ms
from bfcalc.errors import DivergentIntegral, NonIntegrable, ToleranceNotMet
from bfcalc.functions import check_alternating


def test_laplace_of_dirac_at_zero():
    # [TRIVIAL] e^0 = 1
    assert ms.laplace_transform(ms.dirac(0.0), 5.0) == pytest.approx(1.0, abs=1e-14)


def test_laplace_of_exp_density():
    # [TRIVIAL] int e^{-2s} ds = 1/2
    assert ms.laplace_transform(ms.exp_density(1.0), 1.0, 1e-12) == pytest.approx(0.5, abs=1e-11)


def test_laplace_of_gamma_density():
    # [TRIVIAL] Gamma transform (1 + tau)^{-t} at t = 2, tau = 1
    val = ms.laplace_transform(ms.gamma_density(2.0), 1.0, 1e-12)
    assert val == pytest.approx(0.25, abs=1e-11)


@pytest.mark.parametrize("t", [0.3, 1.0, 2.5])
def test_gamma_transform_family(t):
    # [DERIVED] closed form (1 + tau)^{-t}
    for tau in (0.01, 1.0, 30.0):
        val = ms.laplace_transform(ms.gamma_density(t), tau, 1e-11)
        assert val == pytest.approx((1.0 + tau) ** -t, abs=1e-10)


def test_laplace_complex_argument():
    # [DERIVED] int e^{-s} e^{-s z} ds = 1 / (1 + z) for Re z >= 0
    z = 0.5 + 3.0j
    val = ms.laplace_transform(ms.exp_density(1.0), z, 1e-11)
    assert abs(val - 1.0 / (1.0 + z)) < 1e-9


def test_laplace_of_infinite_mass_on_imaginary_axis_diverges():
    with pytest.raises(DivergentIntegral):
        ms.laplace_transform(ms.log_levy(), 2.0j)


def test_integrate_stable_density_against_one_minus_exp():
    # [DERIVED] psi(1) = 1 for psi = sqrt
    mu = ms.stable_levy(0.5)
    val = ms.integrate(mu, lambda s: -np.expm1(-s), 1e-11, q=1.0)
    assert val == pytest.approx(1.0, abs=1e-9)


def test_integrate_weighted_atom():
    # [TRIVIAL] 3 * 1^2
    assert ms.integrate(ms.atom(1.0, 3.0), lambda s: s**2) == pytest.approx(3.0)


def test_integrate_singular_function():
    # [TRIVIAL] int_0^1 s^{-1/2} ds = 2
    val = ms.integrate(ms.uniform_density(0.0, 1.0), lambda s: s**-0.5, 1e-11, q=-0.5)
    assert val == pytest.approx(2.0, abs=1e-9)


def test_integrate_non_integrable_is_refused():
    # density s^{-1} near 0 against f = 1 gives p - q = 1
    mu = ms.power_density(1.0, 0.0, 1.0)
    with pytest.raises(NonIntegrable):
        ms.integrate(mu, lambda s: np.ones_like(s), q=0.0)


def test_integrate_zero_tolerance_fails_fast():
    with pytest.raises(ToleranceNotMet):
        ms.integrate(ms.exp_density(1.0), lambda s: np.ones_like(s), 0.0)


def test_total_mass_values():
    # [TRIVIAL] each density below has a closed-form mass
    assert ms.exp_density(2.0).total_mass == pytest.approx(0.5, abs=1e-10)
    assert ms.gamma_density(0.7).total_mass == pytest.approx(1.0, abs=1e-9)
    assert ms.stable_half(1.3).total_mass == pytest.approx(1.0, abs=1e-8)
    assert ms.uniform_density(1.0, 4.0, 2.0).total_mass == pytest.approx(6.0, abs=1e-12)
    assert math.isinf(ms.log_levy().total_mass)
    assert math.isinf(ms.stable_levy(0.5).total_mass)
    assert ms.ZERO.total_mass == 0.0


def test_bessel_compound_mass():
    # [DERIVED] continuous part of a unit-rate compound Poisson law: 1 - e^{-t}
    for t in (0.5, 2.0):
        assert ms.bessel_compound(t).total_mass == pytest.approx(1.0 - math.exp(-t), abs=1e-9)


def test_levy_check_stable_density_ok():
    # [DERIVED] int s/(1+s) s^{-3/2}/(2 sqrt pi) ds = pi / (2 sqrt pi) = sqrt(pi)/2
    rep = ms.levy_integrability_check(ms.stable_levy(0.5))
    assert rep.ok
    assert rep.value == pytest.approx(math.sqrt(math.pi) / 2.0, abs=1e-8)


def test_levy_check_rejects_s_minus_two():
    # [TRIVIAL] log-divergent at the origin
    rep = ms.levy_integrability_check(ms.power_density(2.0, 0.0, 1.0))
    assert not rep.ok


def test_levy_check_single_atom():
    # [TRIVIAL] 1 / (1 + 1)
    rep = ms.levy_integrability_check(ms.atom(1.0))
    assert rep.ok and rep.value == pytest.approx(0.5)


def test_levy_check_rejects_atom_at_origin_and_heavy_tail():
    assert not ms.levy_integrability_check(ms.dirac(0.0)).ok
    assert not ms.levy_integrability_check(ms.power_density(0.5, 1.0, math.inf)).ok


def test_restrict_splits_mass():
    mu = ms.exp_density(1.0) + ms.atom(0.5, 2.0)
    lo = ms.restrict(mu, 0.0, 1.0)
    hi = ms.restrict(mu, 1.0, math.inf)
    # [TRIVIAL] 1 - e^{-1} plus the atom, and e^{-1}
    assert lo.total_mass == pytest.approx(1.0 - math.exp(-1) + 2.0, abs=1e-10)
    assert hi.total_mass == pytest.approx(math.exp(-1), abs=1e-10)


def test_poisson_atoms_mass_and_transform():
    # [TRIVIAL] exponential series; transform exp(-t lambda (1 - e^{-c tau}))
    mu = ms.poisson_atoms(1.0, 1.0, 1.0, 1e-13)
    assert mu.total_mass == pytest.approx(1.0, abs=1e-12)
    for tau in (0.1, 1.0, 10.0):
        expect = math.exp(-(1.0 - math.exp(-tau)))
        assert ms.laplace_transform(mu, tau) == pytest.approx(expect, abs=1e-12)


def test_poisson_atoms_zero_rate_and_zero_tol():
    assert ms.poisson_atoms(1.0, 0.0, 1.0).atoms == ((0.0, 1.0),)
    with pytest.raises(ToleranceNotMet):
        ms.poisson_atoms(1.0, 1.0, 1.0, 0.0)


def test_measure_construction_rejects_bad_input():
    with pytest.raises(ValueError):
        ms.atom(-1.0)
    with pytest.raises(ValueError):
        ms.atom(1.0, 0.0)
    with pytest.raises(ValueError):
        ms.DensityPiece(lambda s: np.ones_like(s), 0.0, math.inf)  # compact tail on (0, inf)
    with pytest.raises(ValueError):
        ms.DensityPiece(lambda s: -np.ones_like(s), 0.0, 1.0)


def test_integrate_ones_reproduces_mass():
    mu = ms.gamma_density(1.7) + ms.atom(2.0, 0.25) + ms.uniform_density(0.0, 3.0, 0.5)
    val = ms.integrate(mu, lambda s: np.ones_like(s), 1e-10)
    assert val == pytest.approx(mu.total_mass, abs=1e-9)


FINITE = [ms.exp_density(1.0), ms.gamma_density(0.5), ms.stable_half(1.0),
          ms.bessel_compound(1.0), ms.atom(2.0, 1.5) + ms.uniform_density(0.0, 1.0)]


@given(i=st.integers(0, len(FINITE) - 1), j=st.integers(0, len(FINITE) - 1),
       tau=st.floats(1e-3, 1e2))
def test_laplace_linearity(i, j, tau):
    tol = 1e-10
    lhs = ms.laplace_transform(FINITE[i] + FINITE[j], tau, tol)
    rhs = ms.laplace_transform(FINITE[i], tau, tol) + ms.laplace_transform(FINITE[j], tau, tol)
    assert abs(lhs - rhs) <= 2 * tol + 1e-12


@given(i=st.integers(0, len(FINITE) - 1), t1=st.floats(1e-3, 1e2), t2=st.floats(1e-3, 1e2))
def test_laplace_monotone(i, t1, t2):
    lo, hi = sorted((t1, t2))
    a = ms.laplace_transform(FINITE[i], lo, 1e-11)
    b = ms.laplace_transform(FINITE[i], hi, 1e-11)
    assert a >= b - 1e-10
    assert 0.0 < b <= FINITE[i].total_mass + 1e-9


@pytest.mark.parametrize("mu", FINITE, ids=lambda m: m.name)
def test_laplace_completely_monotone(mu):
    x = np.geomspace(0.05, 20.0, 14)
    f = np.array([ms.laplace_transform(mu, t, 1e-13) for t in x])
    rep = check_alternating(x, f, max_order=6, first_sign=1, abs_err=1e-12)
    assert rep.ok, rep
