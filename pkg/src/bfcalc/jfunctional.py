"""The functional ``J[g, psi] = int_0^inf g(s) psi'(s) ds`` and its bounds.

Also hosts ``C[c0; psi]``, the same integral with ``g(s) = exp(-s / c0)``,
which enters the operator estimates for semigroups that are holomorphic but
not sectorially bounded.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import special

from . import measures as ms
from . import quadrature as dq
from .errors import (NonIntegrable, PathDisagreement, PreconditionFailed, ToleranceNotMet,
                     UndecidedDivergence, Violation)
from .functions import (BernsteinFunction, CompletelyMonotoneFunction, bf_derivative, bf_eval,
                        log_grid)

DEFAULT_TOL = 1e-10
BISECTION_STEPS = 60


@dataclass(frozen=True)
class JValue:
    value: float
    error: float
    certificate: str = ""


def _divergence_certificate(h: Callable, lo: float = 1e2, hi: float = 1e12):
    """Evidence that ``h`` is not integrable at infinity.

    ``s h(s)`` positive and nondecreasing over ten decades means ``h(s) >= c / s``
    on that window; the window is reported with the certificate.
    """
    s = np.geomspace(lo, hi, 41)
    with np.errstate(all="ignore"):
        v = s * np.asarray(h(s), dtype=float)
    if not np.all(np.isfinite(v)) or v[0] <= 0:
        return None
    if np.all(np.diff(v) >= -1e-12 * np.abs(v[:-1])):
        return f"s*h(s) >= {v[0]:.6g} > 0 and nondecreasing on [{lo:g}, {hi:g}]"
    return None


def j_value_detailed(g: CompletelyMonotoneFunction, psi: BernsteinFunction,
                     tol: float = DEFAULT_TOL) -> JValue:
    if psi.is_constant or g.is_zero:
        return JValue(0.0, 0.0, "psi' = 0 or g = 0")
    if g.g_infinity > 0 and math.isinf(psi.psi_infinity):
        return JValue(math.inf, 0.0,
                      f"g >= g(inf) = {g.g_infinity:.6g} > 0 and psi(inf) = inf")

    def h(s):
        with np.errstate(over="ignore", under="ignore"):
            return g.values(s, tol) * psi.derivatives(s, tol)

    try:
        res = dq.exp_sinh(h, 0.0, tol)
    except (NonIntegrable, ToleranceNotMet) as exc:
        cert = _divergence_certificate(h)
        if cert is not None:
            return JValue(math.inf, 0.0, cert)
        raise UndecidedDivergence(f"J[{g.name}, {psi.name}]: {exc}") from exc
    return JValue(float(res.value), float(res.error))


def j_value(g: CompletelyMonotoneFunction, psi: BernsteinFunction,
            tol: float = DEFAULT_TOL) -> float:
    """``J[g, psi]``, or ``inf`` backed by a divergence certificate."""
    return j_value_detailed(g, psi, tol).value


def j_closed_form_exp(psi: BernsteinFunction, t: float) -> float:
    """``J[exp(-t psi), psi] = (exp(-t psi(0)) - exp(-t psi(inf))) / t``."""
    if not t > 0:
        raise ValueError("t must be positive")
    far = 0.0 if math.isinf(psi.psi_infinity) else math.exp(-t * psi.psi_infinity)
    return (math.exp(-t * psi.a) - far) / t


def _grid_check(lhs, rhs, what: str, grid):
    bad = ~(lhs <= rhs * (1.0 + 1e-12) + 1e-14)
    if np.any(bad):
        i = int(np.argmax(bad))
        raise Violation(f"{what} fails at s={grid[i]:.6g}: {lhs[i]:.12g} > {rhs[i]:.12g}")


def j_bound_via_q(g: CompletelyMonotoneFunction, psi: BernsteinFunction, q: Callable,
                  tol: float = DEFAULT_TOL, grid=None) -> float:
    """``int_0^inf q`` when ``g(s) <= q(psi(s))`` (spot-checked on ``grid``)."""
    grid = log_grid() if grid is None else np.asarray(grid, dtype=float)
    with np.errstate(all="ignore"):
        _grid_check(g.values(grid, tol), np.asarray(q(psi.values(grid, tol)), dtype=float),
                    "g(s) <= q(psi(s))", grid)
    return float(dq.exp_sinh(lambda s: np.asarray(q(s), dtype=float), 0.0, tol).value)


def j_bound_via_f(g: CompletelyMonotoneFunction, psi: BernsteinFunction, f: Callable,
                  tol: float = DEFAULT_TOL, grid=None) -> float:
    """``int_0^1 f`` when ``psi(s) <= f(g(s))``, ``g(0+) <= 1`` and ``g(inf) = 0``."""
    if g.g_zero_plus > 1.0 + 1e-12:
        raise PreconditionFailed(f"g(0+) = {g.g_zero_plus:.6g} exceeds 1")
    if g.g_infinity > 0:
        raise PreconditionFailed("g(inf) must vanish")
    grid = log_grid() if grid is None else np.asarray(grid, dtype=float)
    with np.errstate(all="ignore"):
        _grid_check(psi.values(grid, tol), np.asarray(f(g.values(grid, tol)), dtype=float),
                    "psi(s) <= f(g(s))", grid)
    return float(dq.tanh_sinh(lambda s: np.asarray(f(s), dtype=float), 0.0, 1.0, tol).value)


def power_constant(alpha: float, variant: str = "stated") -> float:
    """Constant multiplying ``psi(t**(-1/alpha))`` in the power-law J bound.

    ``stated`` is ``1 + 1/(alpha e)``. ``corrected`` is
    ``(1 - 1/e) + Gamma(1 + 1/alpha, 1)``, which is what integrating by parts
    and using ``psi(c x) - psi(0) <= c (psi(x) - psi(0))`` for ``c >= 1``
    actually gives; the two agree at ``alpha = 1`` and the stated one is too
    small for ``alpha < 1`` (``psi(tau) = tau`` is a counterexample).
    """
    if not 0.0 < alpha <= 1.0:
        raise ValueError("alpha must lie in (0, 1]")
    if variant in ("stated", "final_line"):
        return 1.0 + 1.0 / (alpha * math.e)
    if variant == "corrected":
        upper = special.gammaincc(1.0 + 1.0 / alpha, 1.0) * special.gamma(1.0 + 1.0 / alpha)
        return (1.0 - math.exp(-1.0)) + float(upper)
    raise ValueError(f"unknown variant {variant!r}")


def j_bound_power(psi: BernsteinFunction, alpha: float, t: float,
                  variant: str = "stated") -> float:
    """Bound on ``J[exp(-t s**alpha), psi]``.

    * ``stated``: ``(1 + 1/(alpha e)) psi(t**(-1/alpha)) - psi(0)``;
    * ``final_line``: the same constant with the argument ``t**(-alpha)``;
    * ``corrected``: ``K_alpha (psi(t**(-1/alpha)) - psi(0))``, see
      :func:`power_constant`.
    """
    if not t > 0:
        raise ValueError("t must be positive")
    k = power_constant(alpha, variant)
    if variant == "final_line":
        return k * bf_eval(psi, t ** (-alpha)) - psi.a
    x = t ** (-1.0 / alpha)
    if variant == "corrected":
        return k * (bf_eval(psi, x) - psi.a)
    return k * bf_eval(psi, x) - psi.a


def j_bound_linear(psi: BernsteinFunction, t: float, sharp: bool = False) -> float:
    """``J[exp(-t s), psi] <= psi(1/t)`` (``psi(1/t) - psi(0)`` when ``sharp``)."""
    if not t > 0:
        raise ValueError("t must be positive")
    v = bf_eval(psi, 1.0 / t)
    return v - psi.a if sharp else v


def bounded_psi_constant(psi: BernsteinFunction, phi: BernsteinFunction,
                         tol: float = DEFAULT_TOL) -> float:
    """``psi'(0)/phi'(1) + (psi(inf) - psi(1))/phi(1)``."""
    if not psi.is_bounded:
        raise PreconditionFailed(f"{psi.name} is unbounded")
    if psi.a != 0.0:
        raise PreconditionFailed(f"{psi.name} has psi(0) = {psi.a:g} != 0")
    d0 = psi.derivative_at_zero
    if not math.isfinite(d0):
        raise PreconditionFailed(f"{psi.name} has psi'(0+) = inf")
    if phi.is_constant:
        raise PreconditionFailed(f"{phi.name} is constant")
    return d0 / bf_derivative(phi, 1.0, tol) + (psi.psi_infinity - bf_eval(psi, 1.0)) / bf_eval(phi, 1.0)


def j_bound_bounded_psi(psi: BernsteinFunction, phi: BernsteinFunction, t: float,
                        tol: float = DEFAULT_TOL, crude: bool = False) -> float:
    """``J[exp(-t phi), psi] <= bounded_psi_constant(psi, phi) / t``; ``crude`` gives ``psi(inf)``."""
    if not t > 0:
        raise ValueError("t must be positive")
    const = bounded_psi_constant(psi, phi, tol)
    return psi.psi_infinity if crude else const / t


def c_constant_paths(c0: float, psi: BernsteinFunction, tol: float = DEFAULT_TOL):
    """``C[c0; psi]`` by the J-integral and by the Levy-triple form."""
    if c0 < 0:
        raise ValueError("c0 must be nonnegative")
    if c0 == 0.0 or psi.is_constant:
        return 0.0, 0.0
    direct = dq.exp_sinh(lambda s: np.exp(-s / c0) * psi.derivatives(s, tol), 0.0, tol).value
    triple = psi.b * c0
    if not psi.gamma.is_empty:
        triple += ms.integrate(psi.gamma, lambda s: c0 * s / (1.0 + c0 * s), tol, q=1.0)
    return float(direct), float(triple)


def c_constant(c0: float, psi: BernsteinFunction, tol: float = DEFAULT_TOL) -> float:
    """``C[c0; psi]``, zero for ``c0 = 0``; both paths must agree within ``2 tol``."""
    direct, triple = c_constant_paths(c0, psi, tol)
    if abs(direct - triple) > 2.0 * tol:
        raise PathDisagreement(
            f"C[{c0:g}; {psi.name}]: integral {direct:.15g} vs triple {triple:.15g}")
    return triple


def psi_inverse(psi: BernsteinFunction, u, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Solve ``psi(s) = u`` by bisection; saturates to ``0`` and ``inf``.

    The bracket grows geometrically from 1 and the 60 bisection steps are
    taken in ``log s``. Values ``u`` at or beyond ``psi(inf)`` (as happens at
    quadrature nodes rounding onto the endpoint) map to ``inf``.
    """
    u = np.atleast_1d(np.asarray(u, dtype=float))
    out = np.full_like(u, np.inf)
    inner = (u < psi.psi_infinity) & np.isfinite(u)
    out[u <= psi.a] = 0.0
    inner &= u > psi.a
    v = u[inner]
    lo = np.ones_like(v)
    hi = np.ones_like(v)
    for _ in range(1100):
        low_bad = psi.values(lo, tol) > v
        if not np.any(low_bad):
            break
        lo = np.where(low_bad, 0.5 * lo, lo)
    for _ in range(1100):
        high_bad = (psi.values(hi, tol) < v) & (hi < 1e300)
        if not np.any(high_bad):
            break
        hi = np.where(high_bad, 2.0 * hi, hi)
    reached = psi.values(hi, tol) >= v
    lo = np.minimum(lo, hi)
    for _ in range(BISECTION_STEPS):
        mid = np.where(lo > 0, np.sqrt(lo) * np.sqrt(hi), 0.5 * hi)
        below = psi.values(mid, tol) < v
        lo = np.where(below, mid, lo)
        hi = np.where(below, hi, mid)
    res = np.where(lo > 0, np.sqrt(lo) * np.sqrt(hi), hi)
    out[inner] = np.where(reached, res, np.inf)
    return out


def reconstruct_q(g: CompletelyMonotoneFunction, psi: BernsteinFunction,
                  tol: float = DEFAULT_TOL) -> Callable:
    """``q(u) = g(psi^{-1}(u))``; ``int q`` over ``(psi(0), psi(inf))`` equals J."""
    def q(u):
        s = psi_inverse(psi, u, tol)
        finite = np.isfinite(s)
        vals = np.full(s.shape, g.g_infinity)
        if np.any(finite):
            vals[finite] = g.values(s[finite], tol)
        return vals
    return q


def integrate_reconstructed_q(g: CompletelyMonotoneFunction, psi: BernsteinFunction,
                              tol: float = DEFAULT_TOL) -> float:
    q = reconstruct_q(g, psi, tol)
    if psi.is_constant:
        return 0.0
    top = psi.psi_infinity
    if math.isinf(top):
        return float(dq.exp_sinh(lambda u: q(psi.a + u), 0.0, tol).value)
    return float(dq.tanh_sinh(q, psi.a, top, tol).value)
