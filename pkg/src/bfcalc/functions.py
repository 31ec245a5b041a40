"""Bernstein and completely monotone functions.

A Bernstein function is stored through its Levy-Khintchine triple
``(a, b, gamma)``::

    psi(z) = a + b z + int (1 - exp(-s z)) gamma(ds)

and optionally a closed form used as the fast path. A completely monotone
function is stored through its representing measure ``nu``,
``g(z) = int exp(-s z) nu(ds)``. Both evaluate on the closed right half
plane.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Optional

import numpy as np

from . import measures as ms
from .errors import NonIntegrable, PreconditionFailed, ToleranceNotMet
from .measures import DensityPiece, Measure, Tail
from .records import BoundCheckRecord

DEFAULT_TOL = 1e-10
SIGMA = 1.0 - math.exp(-1.0)
HALF_PLANE_CONSTANT = 2.0 / SIGMA


def log_grid(lo: float = 1e-4, hi: float = 1e4, points: int = 81) -> np.ndarray:
    return np.geomspace(lo, hi, points)


@dataclass(frozen=True)
class LevyTriple:
    a: float = 0.0
    b: float = 0.0
    gamma: Measure = ms.ZERO
    check: bool = field(default=True, compare=False, repr=False)

    def __post_init__(self):
        if not (self.a >= 0 and self.b >= 0) or math.isinf(self.a) or math.isinf(self.b):
            raise ValueError(f"Levy triple needs finite a, b >= 0 (got a={self.a}, b={self.b})")
        if self.check:
            report = ms.levy_integrability_check(self.gamma)
            if not report.ok:
                raise ValueError(f"not a Levy measure: {report.reason}")


@dataclass(frozen=True)
class ClosedForm:
    """``value`` and derivatives ``derivs[k]`` (k = 1, 2, ...), vectorised.

    ``value`` and the derivatives must accept complex arrays. ``abs_err``
    bounds the absolute rounding error of ``value`` beyond the usual relative
    one (nonzero when the formula subtracts nearly equal numbers).
    """

    value: Callable
    derivs: tuple = ()
    abs_err: float = 0.0

    def derivative(self, k: int) -> Optional[Callable]:
        if k == 0:
            return self.value
        return self.derivs[k - 1] if k <= len(self.derivs) else None


@dataclass(frozen=True)
class BernsteinFunction:
    """``psi`` through its triple; ``tag`` identifies catalog members, e.g. ``("power", 0.5)``."""

    triple: LevyTriple
    closed_form: Optional[ClosedForm] = None
    name: str = "psi"
    tag: tuple = ()

    def __call__(self, z, tol: float = DEFAULT_TOL):
        return bf_eval(self, z, tol)

    @property
    def a(self) -> float:
        return self.triple.a

    @property
    def b(self) -> float:
        return self.triple.b

    @property
    def gamma(self) -> Measure:
        return self.triple.gamma

    @cached_property
    def levy_mass(self) -> float:
        return self.triple.gamma.total_mass

    @cached_property
    def psi_infinity(self) -> float:
        if self.b > 0 or math.isinf(self.levy_mass):
            return math.inf
        return self.a + self.levy_mass

    @property
    def is_bounded(self) -> bool:
        return self.b == 0 and math.isfinite(self.levy_mass)

    @property
    def is_constant(self) -> bool:
        return self.b == 0 and self.gamma.is_empty

    def _closed_at_zero(self, k: int) -> Optional[float]:
        d = self.closed_form.derivative(k) if self.closed_form is not None else None
        if d is None:
            return None
        with np.errstate(all="ignore"):
            v = float(np.real(d(np.zeros(1)))[0])
        return v if math.isfinite(v) else None

    @cached_property
    def derivative_at_zero(self) -> float:
        """``psi'(0+) = b + int s gamma(ds)`` (possibly infinite).

        A finite closed-form value is preferred; infinite moments are
        detected on the triple.
        """
        v = self._closed_at_zero(1)
        return v if v is not None else self.b + _moment(self.gamma, 1)

    @cached_property
    def second_derivative_at_zero(self) -> float:
        """``psi''(0+) = -int s**2 gamma(ds)`` (possibly minus infinity)."""
        v = self._closed_at_zero(2)
        return v if v is not None else -_moment(self.gamma, 2)

    def values(self, tau, tol: float = DEFAULT_TOL, method: str = "auto") -> np.ndarray:
        """Vectorised evaluation at real ``tau >= 0``."""
        tau = np.asarray(tau, dtype=float)
        if self.closed_form is not None and method in ("auto", "closed"):
            with np.errstate(divide="ignore", invalid="ignore"):
                return np.real(self.closed_form.value(tau)).astype(float)
        if method == "closed":
            raise ValueError(f"{self.name} has no closed form")
        flat = np.atleast_1d(tau).ravel()
        out = self.a + self.b * flat + _triple_real(self.gamma, flat, tol)
        return out.reshape(tau.shape)

    def derivatives(self, tau, tol: float = DEFAULT_TOL, method: str = "auto") -> np.ndarray:
        """Vectorised ``psi'`` at real ``tau > 0``."""
        tau = np.asarray(tau, dtype=float)
        if self.closed_form is not None and method in ("auto", "closed"):
            d1 = self.closed_form.derivative(1)
            if d1 is not None:
                with np.errstate(divide="ignore", invalid="ignore"):
                    return np.real(d1(tau)).astype(float)
        flat = np.atleast_1d(tau).ravel()
        out = self.b + _triple_derivative(self.gamma, flat, tol)
        return np.broadcast_to(out, flat.shape).reshape(tau.shape).copy()


def _moment(gamma: Measure, k: int) -> float:
    total = sum(w * x**k for x, w in gamma.atoms)
    for p in gamma.pieces:
        sub = Measure((), (p,))
        try:
            total += ms.integrate(sub, lambda s: s**k, DEFAULT_TOL, q=k, q_inf=k)
        except NonIntegrable:
            return math.inf
    return float(total)


def _triple_real(gamma: Measure, tau: np.ndarray, tol: float):
    if gamma.is_empty:
        return np.zeros_like(tau)

    def f(s):
        return -np.expm1(-np.outer(s, tau))

    return np.asarray(ms.integrate(gamma, f, tol, q=1.0, q_inf=0.0), dtype=float)


def _triple_derivative(gamma: Measure, tau: np.ndarray, tol: float):
    if gamma.is_empty:
        return np.zeros_like(tau)
    if np.any(tau <= 0):
        raise ValueError("the derivative through the triple needs tau > 0")

    def f(s):
        return s[:, None] * np.exp(-np.outer(s, tau))

    return np.asarray(ms.integrate(gamma, f, tol, q=1.0, q_inf=1.0, damping=float(tau.min())),
                      dtype=float)


def _triple_complex(gamma: Measure, z: complex, tol: float) -> complex:
    """``int (1 - exp(-s z)) gamma(ds)`` for complex ``z``, ``Re z >= 0``.

    Split at ``s = 1``: the part near the origin carries the singular weight
    and is integrated with panels; on ``[1, inf)`` the constant 1 gives the
    tail mass and ``exp(-s z)`` is damped by ``Re z`` (or by the tail).
    """
    if gamma.is_empty:
        return 0j
    omega = abs(z.imag)
    near = ms.restrict(gamma, 0.0, 1.0)
    far = ms.restrict(gamma, 1.0, math.inf)
    value = 0j
    if not near.is_empty:
        value += complex(ms.integrate(near, lambda s: -np.expm1(-s * z), tol / 3, q=1.0,
                                      omega=omega))
    if not far.is_empty:
        value += far.total_mass
        value -= complex(ms.integrate(far, lambda s: np.exp(-s * z), tol / 3,
                                      damping=z.real, omega=omega))
    return value


def bf_eval(psi: BernsteinFunction, z, tol: float = DEFAULT_TOL, method: str = "auto"):
    """``psi(z)`` for ``Re z >= 0``; real input gives a real result.

    ``method`` is ``closed``, ``triple`` or ``auto`` (closed form when available).
    """
    zc = complex(z)
    if zc.real < 0:
        raise ValueError("Bernstein functions are evaluated on Re z >= 0")
    real_input = zc.imag == 0.0 and not isinstance(z, complex)
    if psi.closed_form is not None and method in ("auto", "closed"):
        with np.errstate(divide="ignore", invalid="ignore"):
            val = complex(psi.closed_form.value(np.array([zc]))[0])
    elif method == "closed":
        raise ValueError(f"{psi.name} has no closed form")
    elif zc.imag == 0.0:
        val = complex(psi.values(np.array([zc.real]), tol, method="triple")[0])
    else:
        val = psi.a + psi.b * zc + _triple_complex(psi.gamma, zc, tol)
    return val.real if real_input else val


def bf_derivative(psi: BernsteinFunction, tau: float, tol: float = DEFAULT_TOL,
                  method: str = "auto") -> float:
    """``psi'(tau) = b + int s exp(-s tau) gamma(ds)`` for ``tau > 0``."""
    if not tau > 0:
        raise ValueError("bf_derivative needs tau > 0")
    return float(psi.derivatives(np.array([tau]), tol, method)[0])


def bf_limits(psi: BernsteinFunction):
    """``(psi(0+), psi(inf), drift)``."""
    return psi.a, psi.psi_infinity, psi.b


@dataclass(frozen=True)
class CompletelyMonotoneFunction:
    """``g(z) = int exp(-s z) nu(ds)``.

    ``nu`` may be ``None`` for closed-form-only functions, in which case
    ``zero_plus`` and ``at_infinity`` must supply ``g(0+)`` and ``g(inf)``.
    """

    nu: Optional[Measure]
    closed_form: Optional[ClosedForm] = None
    name: str = "g"
    zero_plus: Optional[float] = None
    at_infinity: Optional[float] = None

    def __post_init__(self):
        if self.nu is None and (self.closed_form is None or self.zero_plus is None
                                or self.at_infinity is None):
            raise ValueError("a CM function without nu needs a closed form, g(0+) and g(inf)")

    def __call__(self, z, tol: float = DEFAULT_TOL):
        return cm_eval(self, z, tol)

    @property
    def is_zero(self) -> bool:
        return self.nu.is_empty if self.nu is not None else self.zero_plus == 0.0

    @cached_property
    def g_zero_plus(self) -> float:
        if self.zero_plus is not None:
            return float(self.zero_plus)
        return self.nu.total_mass

    @cached_property
    def g_infinity(self) -> float:
        """``g(inf) = nu({0})``."""
        if self.at_infinity is not None:
            return float(self.at_infinity)
        return float(sum(w for x, w in self.nu.atoms if x == 0.0))

    @property
    def is_bounded(self) -> bool:
        return math.isfinite(self.g_zero_plus)

    def values(self, tau, tol: float = DEFAULT_TOL, method: str = "auto") -> np.ndarray:
        tau = np.asarray(tau, dtype=float)
        if self.closed_form is not None and method in ("auto", "closed"):
            with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
                return np.real(self.closed_form.value(tau)).astype(float)
        flat = np.atleast_1d(tau).ravel()
        if self.nu is None:
            raise ValueError(f"{self.name} has neither a closed form nor a measure")
        if self.nu.is_empty:
            return np.zeros(tau.shape)
        lo = float(flat.min())
        if lo <= 0 and math.isinf(self.g_zero_plus):
            raise ms.DivergentIntegral(f"{self.name}(0) is infinite")
        out = ms.integrate(self.nu, lambda s: np.exp(-np.outer(s, flat)), tol, damping=max(lo, 0.0))
        return np.broadcast_to(np.asarray(out, dtype=float), flat.shape).reshape(tau.shape).copy()


def cm_eval(g: CompletelyMonotoneFunction, z, tol: float = DEFAULT_TOL, method: str = "auto"):
    zc = complex(z)
    real_input = zc.imag == 0.0 and not isinstance(z, complex)
    if g.closed_form is not None and method in ("auto", "closed"):
        with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
            val = complex(g.closed_form.value(np.array([zc]))[0])
    elif g.nu is None:
        raise ValueError(f"{g.name} has neither a closed form nor a measure")
    else:
        val = complex(ms.laplace_transform(g.nu, zc, tol))
    return val.real if real_input else val


# -- divided-difference certificates ----------------------------------------

@dataclass(frozen=True)
class SignReport:
    ok: bool
    order: int
    worst: float
    where: float
    detail: str = ""


def divided_differences(x: np.ndarray, f: np.ndarray, n: int, abs_err: float = 0.0):
    """n-th divided differences on consecutive windows, with a rounding bound.

    Uses the Lagrange form ``sum_i f_i / prod_{j != i} (x_i - x_j)``; the
    returned slack bounds the effect of relative rounding ``64 eps`` plus an
    absolute error ``abs_err`` in each ``f_i``.
    """
    m = len(x) - n
    dd = np.zeros(m)
    slack = np.zeros(m)
    eps = np.finfo(float).eps
    for k in range(n + 1):
        denom = np.ones(m)
        for j in range(n + 1):
            if j != k:
                denom *= x[k:k + m] - x[j:j + m]
        dd += f[k:k + m] / denom
        slack += (64.0 * eps * np.abs(f[k:k + m]) + abs_err) / np.abs(denom)
    return dd, slack


def check_alternating(x, f, max_order: int = 5, first_sign: int = 1, abs_err: float = 0.0,
                      base_slack: float = 1e-10) -> SignReport:
    """Check ``first_sign * (-1)**n * Delta^n f >= -slack`` for ``n = 0..max_order``."""
    x = np.asarray(x, dtype=float)
    f = np.asarray(f, dtype=float)
    worst = math.inf
    where = math.nan
    for n in range(max_order + 1):
        if n == 0:
            dd, slack = f, 64.0 * np.finfo(float).eps * np.abs(f) + abs_err
        else:
            dd, slack = divided_differences(x, f, n, abs_err)
        signed = first_sign * (-1) ** n * dd
        margin = signed + slack + base_slack
        i = int(np.argmin(margin))
        if margin[i] < worst:
            worst, where = float(margin[i]), float(x[i])
        if margin[i] < 0:
            return SignReport(False, n, float(signed[i]), float(x[i]),
                              f"order {n} divided difference has the wrong sign at x={x[i]:.4g}")
    return SignReport(True, max_order, worst, where)


def check_completely_monotone(g, grid=None, max_order: int = 5, tol: float = DEFAULT_TOL):
    """Sign alternation of divided differences of a CM function (or callable)."""
    grid = log_grid() if grid is None else np.asarray(grid, dtype=float)
    if isinstance(g, CompletelyMonotoneFunction):
        vals = g.values(grid, tol)
        err = g.closed_form.abs_err if g.closed_form is not None else tol
    else:
        vals = np.asarray(g(grid), dtype=float)
        err = 0.0
    return check_alternating(grid, vals, max_order, 1, err)


def check_bernstein(psi: BernsteinFunction, grid=None, max_order: int = 5,
                    tol: float = DEFAULT_TOL, method: str = "auto") -> SignReport:
    """psi >= 0, nondecreasing and psi' CM, through divided differences of psi.

    ``(-1)**(n+1) Delta^n psi >= 0`` for ``n = 1..max_order+1`` is the
    derivative-free form of complete monotonicity of ``psi'`` up to ``max_order``.
    """
    grid = log_grid() if grid is None else np.asarray(grid, dtype=float)
    vals = psi.values(grid, tol, method)
    err = psi.closed_form.abs_err if (psi.closed_form is not None and method != "triple") else tol
    if np.any(vals < -err - 1e-12):
        return SignReport(False, 0, float(vals.min()), float(grid[np.argmin(vals)]),
                          "negative value")
    worst = math.inf
    where = math.nan
    for n in range(1, max_order + 2):
        dd, slack = divided_differences(grid, vals, n, err)
        margin = (-1) ** (n + 1) * dd + slack + 1e-10
        i = int(np.argmin(margin))
        if margin[i] < worst:
            worst, where = float(margin[i]), float(grid[i])
        if margin[i] < 0:
            return SignReport(False, n, float(dd[i]), float(grid[i]),
                              f"order {n} divided difference of psi has the wrong sign")
    return SignReport(True, max_order, worst, where)


@dataclass(frozen=True)
class InvariantReport:
    ok: bool
    failures: tuple = ()


def check_bernstein_invariants(psi: BernsteinFunction, tol: float = 1e-8) -> InvariantReport:
    """Type invariants: triple limits, monotonicity, CM derivative, closed/triple match."""
    fails = []
    grid = log_grid()
    if not check_bernstein(psi, grid).ok:
        fails.append("divided differences")
    if psi.closed_form is not None and not psi.gamma.is_empty:
        taus = np.array([10.0**k for k in range(-4, 5)])
        closed = psi.values(taus, method="closed")
        trip = psi.values(taus, 1e-11, method="triple")
        if np.max(np.abs(closed - trip)) > tol:
            fails.append(f"closed/triple mismatch {np.max(np.abs(closed - trip)):.3g}")
    small = psi.values(np.array([1e-200]))[0]
    if abs(small - psi.a) > 1e-5 * (1.0 + psi.a):
        fails.append("psi(0+) != a")
    if psi.b > 0 or psi.closed_form is not None:
        big = 1e200
        slope = psi.values(np.array([big]))[0] / big
        if abs(slope - psi.b) > 1e-4 * (1.0 + psi.b):
            fails.append("psi(t)/t does not tend to b")
    return InvariantReport(not fails, tuple(fails))


# -- scalar inequality checks -----------------------------------------------

def check_scaling_law(psi: BernsteinFunction, c: float, tau: float,
                      tol: float = DEFAULT_TOL) -> BoundCheckRecord:
    """``psi(c tau) <= c psi(tau)`` for ``c >= 1``."""
    if c < 1 or tau <= 0:
        raise ValueError("check_scaling_law needs c >= 1 and tau > 0")
    lhs = bf_eval(psi, c * tau, tol)
    rhs = c * bf_eval(psi, tau, tol)
    return BoundCheckRecord("scaling_law", lhs, rhs, psi=psi.name, t=tau, extra={"c": c})


def check_half_plane_bound(psi: BernsteinFunction, z: complex,
                           tol: float = DEFAULT_TOL) -> BoundCheckRecord:
    """``|psi(z)| <= (2 / sigma) psi(|z|)`` with ``sigma = 1 - 1/e``."""
    z = complex(z)
    if z.real < 0 or z == 0:
        raise ValueError("check_half_plane_bound needs Re z >= 0 and z != 0")
    lhs = abs(bf_eval(psi, z, tol))
    base = bf_eval(psi, abs(z), tol)
    observed = lhs / base if base > 0 else (0.0 if lhs == 0 else math.inf)
    return BoundCheckRecord("half_plane", lhs, HALF_PLANE_CONSTANT * base, psi=psi.name,
                            extra={"re_z": z.real, "im_z": z.imag, "observed_ratio": observed})


def check_sector_product_bound(g: CompletelyMonotoneFunction, psi: BernsteinFunction,
                               beta: float, z: complex, J_value: float | None = None,
                               tol: float = DEFAULT_TOL) -> list:
    """Pointwise (i) and, for finite ``J_value``, uniform (ii) sector bounds."""
    z = complex(z)
    if not 0 < beta < 0.5 * math.pi:
        raise ValueError("beta must lie in (0, pi/2)")
    if z == 0 or abs(np.angle(z)) > beta * (1.0 + 1e-12):
        raise ValueError("z must lie in the closed sector |arg z| <= beta")
    k = 2.0 / (SIGMA * math.cos(beta))
    lhs = abs(cm_eval(g, z, tol) * bf_eval(psi, z, tol))
    r = abs(z) * math.cos(beta)
    extra = {"beta": beta, "re_z": z.real, "im_z": z.imag}
    out = [BoundCheckRecord("sector_pointwise", lhs, k * cm_eval(g, r, tol) * bf_eval(psi, r, tol),
                            psi=psi.name, g_or_phi=g.name, extra=extra)]
    if J_value is not None and math.isfinite(J_value):
        g0 = g.g_zero_plus
        first = 0.0 if psi.a == 0 else g0 * psi.a
        out.append(BoundCheckRecord("sector_uniform", lhs, k * (first + J_value), psi=psi.name,
                                    g_or_phi=g.name, extra=dict(extra), J=J_value))
    return out


# -- constructions -----------------------------------------------------------

def _times_s(piece: DensityPiece) -> DensityPiece:
    dens = piece.density
    tail = piece.tail
    if tail.kind == "exponential":
        # s exp(-r s) <= 2 / (e r) exp(-r s / 2)
        tail = Tail("exponential", 0.5 * tail.rate, tail.scale * 2.0 / (math.e * tail.rate))
    elif tail.kind == "polynomial":
        tail = Tail("polynomial", tail.rate - 1.0, tail.scale)
    return DensityPiece(lambda s: np.asarray(s, dtype=float) * dens(s), piece.lower, piece.upper,
                        piece.singularity - 1.0 if piece.lower == 0.0 else 0.0, tail,
                        f"s*{piece.name}")


def one_minus_derivative_bf(phi: BernsteinFunction, tol: float = 1e-8) -> BernsteinFunction:
    """``psi = 1 - phi'`` for ``phi'(0+) = 1``: triple ``(0, 0, s gamma_phi(ds))``."""
    d0 = phi.derivative_at_zero
    if not abs(d0 - 1.0) <= tol:
        raise PreconditionFailed(f"phi'(0+) = {d0:.12g}, expected 1")
    if math.isinf(phi.second_derivative_at_zero):
        raise PreconditionFailed("phi''(0+) is infinite")
    gamma = Measure(tuple((x, x * w) for x, w in phi.gamma.atoms),
                    tuple(_times_s(p) for p in phi.gamma.pieces), f"s*{phi.gamma.name}")
    closed = None
    if phi.closed_form is not None and len(phi.closed_form.derivs) >= 2:
        d = phi.closed_form.derivs
        shifted = tuple((lambda f: (lambda z: -f(z)))(f) for f in d[1:])
        closed = ClosedForm(lambda z, d1=d[0]: 1.0 - d1(z), shifted, 4.0 * np.finfo(float).eps)
    return BernsteinFunction(LevyTriple(0.0, 0.0, gamma), closed, f"1-d({phi.name})")


# -- catalog -----------------------------------------------------------------

def _const(c):
    return lambda z: np.full(np.shape(z), c, dtype=complex)


def power(alpha: float = 0.5) -> BernsteinFunction:
    """``tau**alpha``; ``alpha = 1`` is the pure drift."""
    if not 0.0 < alpha <= 1.0:
        raise ValueError("power needs alpha in (0, 1]")
    if alpha == 1.0:
        return BernsteinFunction(LevyTriple(0.0, 1.0), ClosedForm(lambda z: z + 0j,
                                 (_const(1.0), _const(0.0), _const(0.0))), "power:1", ("power", 1.0))
    a = alpha
    derivs = (lambda z: a * np.power(z, a - 1),
              lambda z: a * (a - 1) * np.power(z, a - 2),
              lambda z: a * (a - 1) * (a - 2) * np.power(z, a - 3))
    return BernsteinFunction(LevyTriple(0.0, 0.0, ms.stable_levy(alpha)),
                             ClosedForm(lambda z: np.power(z, a), derivs), f"power:{alpha:g}",
                             ("power", float(alpha)))


def log1p() -> BernsteinFunction:
    derivs = (lambda z: 1.0 / (1.0 + z), lambda z: -1.0 / (1.0 + z) ** 2,
              lambda z: 2.0 / (1.0 + z) ** 3)
    return BernsteinFunction(LevyTriple(0.0, 0.0, ms.log_levy()),
                             ClosedForm(lambda z: np.log1p(z), derivs), "log1p", ("log1p",))


def bounded_exp(c: float = 1.0, lam: float = 1.0) -> BernsteinFunction:
    """``lam (1 - exp(-c tau))``, Levy measure ``lam delta_c``."""
    if c <= 0 or lam <= 0:
        raise ValueError("bounded_exp needs c > 0 and lambda > 0")
    derivs = (lambda z: lam * c * np.exp(-c * z), lambda z: -lam * c * c * np.exp(-c * z),
              lambda z: lam * c**3 * np.exp(-c * z))
    return BernsteinFunction(LevyTriple(0.0, 0.0, ms.atom(c, lam)),
                             ClosedForm(lambda z: -lam * np.expm1(-c * z), derivs),
                             f"bounded_exp:c={c:g},lambda={lam:g}", ("bounded_exp", c, lam))


def rational() -> BernsteinFunction:
    """``tau / (1 + tau)``, Levy density ``exp(-s)``."""
    derivs = (lambda z: (1.0 + z) ** -2, lambda z: -2.0 * (1.0 + z) ** -3,
              lambda z: 6.0 * (1.0 + z) ** -4)
    return BernsteinFunction(LevyTriple(0.0, 0.0, ms.exp_density(1.0)),
                             ClosedForm(lambda z: z / (1.0 + z), derivs), "rational", ("rational",))


def affine(a: float = 0.0, b: float = 1.0) -> BernsteinFunction:
    return BernsteinFunction(LevyTriple(a, b),
                             ClosedForm(lambda z: a + b * z, (_const(b), _const(0.0), _const(0.0))),
                             f"affine:a={a:g},b={b:g}", ("affine", a, b))


def constant(a: float = 1.0) -> BernsteinFunction:
    return BernsteinFunction(LevyTriple(a, 0.0),
                             ClosedForm(_const(a), (_const(0.0), _const(0.0), _const(0.0))),
                             f"constant:a={a:g}", ("affine", a, 0.0))


def from_triple(a: float, b: float, gamma: Measure, name: str = "triple") -> BernsteinFunction:
    return BernsteinFunction(LevyTriple(a, b, gamma), None, name)


def exp_cm(t: float = 1.0) -> CompletelyMonotoneFunction:
    """``exp(-t tau)``, ``nu = delta_t``."""
    if t < 0:
        raise ValueError("exp needs t >= 0")
    return CompletelyMonotoneFunction(ms.dirac(t), ClosedForm(lambda z: np.exp(-t * z)),
                                      f"exp:{t:g}")


def gamma_cm(t: float = 1.0) -> CompletelyMonotoneFunction:
    """``(1 + tau)**-t``, ``nu`` the Gamma(t) density."""
    return CompletelyMonotoneFunction(ms.gamma_density(t),
                                      ClosedForm(lambda z: np.power(1.0 + z, -t)), f"gamma:{t:g}")


def one_cm() -> CompletelyMonotoneFunction:
    return CompletelyMonotoneFunction(ms.dirac(0.0), ClosedForm(_const(1.0)), "one")


def zero_cm() -> CompletelyMonotoneFunction:
    return CompletelyMonotoneFunction(ms.ZERO, ClosedForm(_const(0.0)), "zero")


def default_psis() -> list:
    return [power(0.5), log1p(), bounded_exp(1.0, 1.0), rational(), affine(0.5, 1.0),
            constant(1.0)]


def default_phis() -> list:
    return [power(1.0), power(0.5), log1p(), bounded_exp(1.0, 1.0)]
