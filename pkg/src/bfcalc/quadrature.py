"""Double-exponential quadrature on finite and half-infinite intervals.

Two changes of variable are used:

* tanh-sinh, ``x = mid + half * tanh(pi/2 sinh t)``, for ``[a, b]``;
* exp-sinh, ``s = a + exp(pi/2 sinh t)``, for ``[a, inf)``.

Both cluster nodes double-exponentially at the endpoints, which absorbs
integrable power singularities ``s**kappa`` (``kappa > -1``) at the left end
and algebraic decay ``s**kappa`` (``kappa < -1``) at infinity. The trapezoid
rule in ``t`` is refined by halving ``h`` until two successive levels agree
within ``tol / 2``. Nodes outside the truncated ``t`` range are summed for a
power-law model of the integrand fitted at the outermost nodes; this only
matters for near-critical exponents such as ``s**-1.01``.

Integrands are vectorised: ``F(nodes)`` receives a 1-D array and returns an
array whose leading axis matches ``nodes`` (trailing axes are allowed, so
matrix-valued integrands work unchanged).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import NonIntegrable, ToleranceNotMet

HALF_PI = 0.5 * math.pi

H0 = 0.5
T_TANH_SINH = 4.0
T_EXP_SINH = 5.0

Integrand = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class QuadResult:
    value: object
    error: float
    evaluations: int
    level: int


def norm(x) -> float:
    """Frobenius/absolute norm; bounds the spectral norm for matrices."""
    if np.ndim(x) == 0:
        return float(abs(x))
    return float(np.linalg.norm(np.ravel(x)))


def _level_t(level: int, T: float) -> np.ndarray:
    n0 = int(round(T / H0))
    if level == 0:
        return H0 * np.arange(-n0, n0 + 1, dtype=float)
    h = H0 / 2**level
    half = n0 * 2 ** (level - 1)
    return h * (2 * np.arange(-half, half, dtype=float) + 1)


def _tanh_sinh_map(t, a, b):
    half = 0.5 * (b - a)
    x = HALF_PI * np.sinh(t)
    e = np.exp(-2.0 * np.abs(x))
    delta = 2.0 * e / (1.0 + e)  # 1 - tanh|x|, without cancellation
    nodes = np.where(t < 0, a + half * delta, b - half * delta)
    w = half * HALF_PI * np.cosh(t) * 4.0 * e / (1.0 + e) ** 2
    dist_left = half * np.where(t < 0, delta, 2.0 - delta)
    return nodes, w, dist_left


def _exp_sinh_map(t, a):
    u = np.exp(HALF_PI * np.sinh(t))
    return a + u, HALF_PI * np.cosh(t) * u, u


def _evaluate(F: Integrand, nodes: np.ndarray, chunk: int):
    parts = []
    for i in range(0, len(nodes), chunk):
        vals = np.asarray(F(nodes[i:i + chunk]))
        if vals.shape[:1] != (len(nodes[i:i + chunk]),):
            raise ValueError("integrand must return one value per node")
        parts.append(vals)
    vals = np.concatenate(parts, axis=0)
    if not np.all(np.isfinite(vals)):
        bad = nodes[~np.isfinite(vals).reshape(len(nodes), -1).all(axis=1)]
        raise NonIntegrable(f"integrand is not finite at s={bad[0]!r}")
    return vals


def _slope(d1, f1, d2, f2):
    n1, n2 = norm(f1), norm(f2)
    if n1 == 0.0 or n2 == 0.0 or d1 == d2:
        return None
    return math.log(n1 / n2) / math.log(d1 / d2)


class _TailModel:
    """Trapezoid nodes beyond the ``t`` cutoff, summed for a power-law model.

    Past the outermost node the integrand is modelled as
    ``F(d) ~ F(d1) * (d / d1)**kappa`` where ``d`` is the distance to the
    endpoint (or ``s`` itself at infinity). Summing the model on the same
    trapezoid grid keeps every level consistent, so no Euler-Maclaurin end
    error is introduced.
    """

    def __init__(self, log_d, log_w, d, f, d2, f2, d3, f3, exponent, tol, left):
        self.zero = True
        self.err = 0.0
        self.log_d = log_d
        self.log_w = log_w
        if norm(d * f) <= 1e-3 * tol and norm(d2 * f2) <= 1e-3 * tol:
            return
        k12 = _slope(d, f, d2, f2)
        k23 = _slope(d2, f2, d3, f3)
        kappa = exponent if exponent is not None else k12
        if kappa is None:
            return
        decay = (1.0 + kappa) if left else (-1.0 - kappa)
        if decay <= 1e-6:
            where = "origin" if left else "infinity"
            raise NonIntegrable(f"integrand ~ s**{kappa:.4g} is not integrable at {where}")
        self.zero = False
        self.kappa = kappa
        self.decay = decay
        self.f = f
        self.log_d1 = math.log(d)
        ref = k23 if exponent is None else k12
        self.spread = abs(kappa - ref) if ref is not None else 0.0

    def value(self, h, T):
        if self.zero:
            return 0.0
        # in t the model decays like exp(-decay * exp(t)); stop at exp(-90)
        t_end = T + math.asinh(95.0 / (self.decay * HALF_PI)) + 1.0
        t = T + h * np.arange(1, int((t_end - T) / h) + 1)
        expo = self.kappa * (self.log_d(t) - self.log_d1) + self.log_w(t)
        factor = float(np.sum(np.exp(expo)))
        tail = h * factor * self.f
        self.err = norm(tail) * min(1.0, self.spread / self.decay)
        return tail


def _ts_logs(a, b):
    half = 0.5 * (b - a)

    def log_d(t):
        x = HALF_PI * np.sinh(np.abs(t))
        return math.log(2.0 * half) - 2.0 * x - np.log1p(np.exp(-2.0 * x))

    def log_w(t):
        x = HALF_PI * np.sinh(np.abs(t))
        return (math.log(4.0 * half * HALF_PI) + np.log(np.cosh(t)) - 2.0 * x
                - 2.0 * np.log1p(np.exp(-2.0 * x)))

    return log_d, log_w


def _es_logs(a, left):
    sign = -1.0 if left else 1.0

    def log_u(t):
        return HALF_PI * np.sinh(sign * np.abs(t))

    def log_d(t):
        if left or a == 0.0:
            return log_u(t)
        return np.logaddexp(math.log(a), log_u(t))

    def log_w(t):
        return math.log(HALF_PI) + np.log(np.cosh(t)) + log_u(t)

    return log_d, log_w


def _de(F, mapping, logs, T, tol, *, left_exponent=None, right_exponent=None,
        infinite=False, min_level=3, max_level=11, chunk=512):
    if not tol > 0:
        raise ToleranceNotMet(f"a tolerance of {tol!r} cannot be certified")
    raw = 0.0
    prev = None
    evals = 0
    corr_l = corr_r = None
    diff = math.inf
    for level in range(max_level + 1):
        t = _level_t(level, T)
        nodes, w, dist = mapping(t)
        vals = _evaluate(F, nodes, chunk)
        evals += len(t)
        raw = raw + np.tensordot(w, vals, axes=1)
        if level == 0:
            corr_l = _TailModel(*logs[0], dist[0], vals[0], dist[1], vals[1],
                                dist[2], vals[2], left_exponent, tol, left=True)
            if infinite:
                corr_r = _TailModel(*logs[1], nodes[-1], vals[-1], nodes[-2], vals[-2],
                                    nodes[-3], vals[-3], right_exponent, tol, left=False)
        h = H0 / 2**level
        est = h * raw + corr_l.value(h, T)
        if corr_r is not None:
            est = est + corr_r.value(h, T)
        if prev is not None:
            diff = norm(est - prev)
            if level >= min_level and diff <= 0.5 * tol:
                err = diff + corr_l.err + (corr_r.err if corr_r is not None else 0.0)
                return QuadResult(est, err, evals, level)
        prev = est
    raise ToleranceNotMet(
        f"double-exponential refinement stalled at level {max_level} "
        f"(last level change {diff:.3g}, tol {tol:.3g})", estimate=prev, error=diff)


def tanh_sinh(F: Integrand, a: float, b: float, tol: float = 1e-10, *,
              left_exponent: float | None = None, **kw) -> QuadResult:
    """Integrate ``F`` over the finite interval ``[a, b]``.

    ``left_exponent`` is the power ``kappa`` with ``F(s) ~ C (s - a)**kappa``
    near ``a``; when omitted it is estimated from the outermost nodes.
    """
    if not b > a:
        if a == b:
            return QuadResult(0.0, 0.0, 0, 0)
        raise ValueError("tanh_sinh requires a < b")
    return _de(F, lambda t: _tanh_sinh_map(t, a, b), (_ts_logs(a, b), None), T_TANH_SINH, tol,
               left_exponent=left_exponent, **kw)


def exp_sinh(F: Integrand, a: float, tol: float = 1e-10, *,
             left_exponent: float | None = None,
             right_exponent: float | None = None, **kw) -> QuadResult:
    """Integrate ``F`` over ``[a, inf)``."""
    return _de(F, lambda t: _exp_sinh_map(t, a), (_es_logs(a, True), _es_logs(a, False)),
               T_EXP_SINH, tol,
               left_exponent=left_exponent, right_exponent=right_exponent,
               infinite=True, **kw)


def tanh_sinh_panels(F: Integrand, a: float, b: float, n_panels: int,
                     tol: float = 1e-10, *, left_exponent: float | None = None,
                     **kw) -> QuadResult:
    """Composite tanh-sinh over ``n_panels`` equal panels (oscillatory integrands)."""
    edges = np.linspace(a, b, n_panels + 1)
    total = 0.0
    err = 0.0
    evals = 0
    level = 0
    part_tol = tol / n_panels
    for i in range(n_panels):
        r = tanh_sinh(F, edges[i], edges[i + 1], part_tol,
                      left_exponent=left_exponent if i == 0 else 0.0,
                      min_level=kw.get("min_level", 2), max_level=kw.get("max_level", 11),
                      chunk=kw.get("chunk", 512))
        total = total + r.value
        err += r.error
        evals += r.evaluations
        level = max(level, r.level)
    return QuadResult(total, err, evals, level)
