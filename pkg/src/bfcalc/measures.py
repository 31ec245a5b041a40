"""Positive measures on [0, inf): atoms plus analytic density pieces.

A :class:`Measure` houses the representing measure of a completely monotone
function, the Levy measure of a Bernstein function and the subordinator
measures ``mu_t``. Densities are closed-form vectorised callables carrying
metadata: the power ``p`` of the singularity ``density(s) ~ C s**-p`` at a
left endpoint ``0``, and a tail tag used to truncate or map the infinite
range.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable

import numpy as np
from scipy import special

from . import quadrature as dq
from .errors import DivergentIntegral, NonIntegrable, ToleranceNotMet

DEFAULT_TOL = 1e-10
MAX_PANELS = 4000
PERIODS_PER_PANEL = 2.0


@dataclass(frozen=True)
class Tail:
    """How a density behaves as ``s -> upper``.

    * ``exponential``: ``density(s) <= scale * exp(-rate * s)`` for ``s >= 1``;
    * ``polynomial``: ``density(s) <= scale * s**-rate`` for ``s >= 1``;
    * ``compact``: the piece has a finite upper endpoint.
    """

    kind: str = "compact"
    rate: float = 0.0
    scale: float = 1.0

    def __post_init__(self):
        if self.kind not in ("exponential", "polynomial", "compact"):
            raise ValueError(f"unknown tail kind {self.kind!r}")


@dataclass(frozen=True)
class DensityPiece:
    density: Callable[[np.ndarray], np.ndarray]
    lower: float = 0.0
    upper: float = math.inf
    singularity: float = 0.0
    tail: Tail = field(default_factory=Tail)
    name: str = "density"

    def __post_init__(self):
        if not (0.0 <= self.lower < self.upper):
            raise ValueError("density piece needs 0 <= lower < upper")
        if math.isinf(self.upper) and self.tail.kind == "compact":
            raise ValueError("an unbounded piece needs an exponential or polynomial tail")
        hi = self.upper if math.isfinite(self.upper) else max(10.0 * (self.lower + 1.0), 1e3)
        grid = np.geomspace(max(self.lower, 1e-6 * (hi - self.lower)) + 1e-300, hi, 33)
        grid = grid[(grid > self.lower) & (grid < self.upper)]
        vals = np.asarray(self.density(grid), dtype=float)
        if np.any(vals < 0) or not np.all(np.isfinite(vals)):
            raise ValueError(f"density {self.name!r} is negative or not finite on its support")

    def scaled(self, c: float) -> "DensityPiece":
        dens = self.density
        return DensityPiece(lambda s: c * dens(s), self.lower, self.upper, self.singularity,
                            Tail(self.tail.kind, self.tail.rate, c * self.tail.scale),
                            f"{c:g}*{self.name}")


@dataclass(frozen=True)
class Measure:
    """``sum_k w_k delta_{x_k} + sum_j density_j(s) ds``; immutable."""

    atoms: tuple = ()
    pieces: tuple = ()
    name: str = "measure"

    def __post_init__(self):
        atoms = tuple((float(x), float(w)) for x, w in self.atoms)
        for x, w in atoms:
            if x < 0 or not math.isfinite(x):
                raise ValueError(f"atom location {x} outside [0, inf)")
            if not w > 0:
                raise ValueError(f"atom weight {w} must be positive")
        object.__setattr__(self, "atoms", atoms)
        object.__setattr__(self, "pieces", tuple(self.pieces))

    def __add__(self, other: "Measure") -> "Measure":
        return Measure(self.atoms + other.atoms, self.pieces + other.pieces,
                       f"{self.name}+{other.name}")

    def scaled(self, c: float) -> "Measure":
        if c <= 0:
            raise ValueError("scaling factor must be positive")
        return Measure(tuple((x, c * w) for x, w in self.atoms),
                       tuple(p.scaled(c) for p in self.pieces), f"{c:g}*{self.name}")

    @property
    def is_empty(self) -> bool:
        return not self.atoms and not self.pieces

    @property
    def is_atomic(self) -> bool:
        return not self.pieces

    @cached_property
    def total_mass(self) -> float:
        mass = sum(w for _, w in self.atoms)
        for p in self.pieces:
            if _infinite_mass(p, q=0.0, q_inf=0.0, damping=0.0):
                return math.inf
            mass += _integrate_piece(p, _ones, DEFAULT_TOL, 0.0, 0.0, 0.0, 0.0)[0]
        return float(mass)


def _ones(s):
    return np.ones_like(s)


def atom(location: float, weight: float = 1.0) -> Measure:
    return Measure(((location, weight),), (), f"{weight:g}*delta({location:g})")


def dirac(location: float = 0.0) -> Measure:
    return atom(location, 1.0)


ZERO = Measure((), (), "zero")


def _infinite_mass(p: DensityPiece, q: float, q_inf: float, damping: float) -> bool:
    if p.lower == 0.0 and p.singularity - q >= 1.0:
        return True
    if math.isinf(p.upper) and p.tail.kind == "polynomial" and damping <= 0.0:
        return p.tail.rate - q_inf <= 1.0
    return False


def _truncation_point(p: DensityPiece, F, tol: float, damping: float) -> float:
    """Smallest-ish S with a certified remainder ``int_S^inf |F| < tol / 4``."""
    if p.tail.kind == "exponential":
        rate = p.tail.rate + damping
        scale = p.tail.scale
    else:
        rate = damping
        scale = p.tail.scale
    S = max(p.lower, 1.0) + max(0.0, math.log(max(scale, 1e-300) / (0.25 * tol * rate))) / rate
    for _ in range(60):
        edge = np.array([S, 1.5 * S])
        vals = np.abs(np.asarray(F(edge)).reshape(2, -1)).max(axis=1)
        if vals[0] / rate <= 0.25 * tol and vals[1] <= vals[0] + 1e-300:
            return S
        S *= 1.5
    raise ToleranceNotMet(f"could not certify a truncation point for {p.name!r}")


def _integrate_piece(p: DensityPiece, f, tol, q, q_inf, damping, omega):
    if _infinite_mass(p, q, q_inf, damping):
        raise NonIntegrable(
            f"integrand against {p.name!r} is not integrable (p={p.singularity}, q={q})")
    if not tol > 0:
        raise ToleranceNotMet(f"a tolerance of {tol!r} cannot be certified")

    def F(s):
        v = np.asarray(f(s))
        d = np.asarray(p.density(s), dtype=float)
        return v * d.reshape(d.shape + (1,) * (v.ndim - 1))

    kappa = q - p.singularity if p.lower == 0.0 else 0.0
    upper = p.upper
    truncated = False
    if math.isinf(upper) and (p.tail.kind == "exponential" or omega > 0.0):
        if p.tail.kind == "polynomial" and damping <= 0.0:
            raise ToleranceNotMet(
                f"oscillatory integrand against the polynomial tail of {p.name!r} "
                "needs exponential damping")
        upper = _truncation_point(p, F, tol, damping)
        truncated = True
    if math.isinf(upper):
        right = q_inf - p.tail.rate if damping <= 0.0 else None
        res = dq.exp_sinh(F, p.lower, 0.5 * tol, left_exponent=kappa, right_exponent=right)
    else:
        n_panels = 1
        if omega > 0.0:
            n_panels = max(1, math.ceil(omega * (upper - p.lower) / (2 * math.pi * PERIODS_PER_PANEL)))
            if n_panels > MAX_PANELS:
                raise ToleranceNotMet(
                    f"oscillation omega={omega:g} over [{p.lower:g}, {upper:g}] exceeds the panel budget")
        if n_panels == 1:
            res = dq.tanh_sinh(F, p.lower, upper, 0.5 * tol, left_exponent=kappa)
        else:
            res = dq.tanh_sinh_panels(F, p.lower, upper, n_panels, 0.5 * tol, left_exponent=kappa)
    err = res.error + (0.25 * tol if truncated else 0.0)
    return res.value, err


def integrate_with_error(mu: Measure, f, tol: float = DEFAULT_TOL, *, q: float = 0.0,
                         q_inf: float = 0.0, damping: float = 0.0, omega: float = 0.0):
    """``(int f dmu, error estimate)``.

    ``f`` is vectorised (leading axis = nodes; matrix values allowed) with
    ``f(s) = O(s**q)`` at ``0+`` and ``O(s**q_inf)`` at infinity. ``damping``
    is an extra exponential decay rate of ``|f|`` (``Re z`` for ``exp(-sz)``)
    and ``omega`` bounds its angular frequency of oscillation.
    """
    if tol < 0:
        raise ValueError("tol must be nonnegative")
    value = 0.0
    err = 0.0
    if mu.atoms:
        locs = np.array([x for x, _ in mu.atoms])
        w = np.array([wt for _, wt in mu.atoms])
        vals = np.asarray(f(locs))
        value = np.tensordot(w, vals, axes=1)
    n = max(1, len(mu.pieces))
    for p in mu.pieces:
        v, e = _integrate_piece(p, f, tol / n, q, q_inf, damping, omega)
        value = value + v
        err += e
    if err > tol:
        raise ToleranceNotMet(f"integration error estimate {err:.3g} exceeds tol {tol:.3g}",
                              estimate=value, error=err)
    return value, err


def integrate(mu: Measure, f, tol: float = DEFAULT_TOL, *, q: float = 0.0,
              q_inf: float = 0.0, damping: float = 0.0, omega: float = 0.0):
    """``int f dmu`` within the absolute error ``tol``."""
    return integrate_with_error(mu, f, tol, q=q, q_inf=q_inf, damping=damping, omega=omega)[0]


def laplace_transform(mu: Measure, tau: complex, tol: float = DEFAULT_TOL):
    """``int exp(-s tau) mu(ds)`` for ``Re tau >= 0``.

    Real input gives a real result. Infinite-mass measures are accepted only
    when ``Re tau > 0`` and the divergence comes from the tail.
    """
    tau = complex(tau)
    if tau.real < 0:
        raise ValueError("the Laplace transform needs Re tau >= 0")
    for p in mu.pieces:
        if p.lower == 0.0 and p.singularity >= 1.0:
            raise DivergentIntegral(f"{p.name!r} has infinite mass near the origin")
    if tau.real == 0 and math.isinf(mu.total_mass):
        raise DivergentIntegral(f"{mu.name!r} has infinite total mass")
    if tau.imag == 0.0:
        x = tau.real
        return float(integrate(mu, lambda s: np.exp(-s * x), tol, damping=x))
    return complex(integrate(mu, lambda s: np.exp(-s * tau), tol,
                             damping=tau.real, omega=abs(tau.imag)))


@dataclass(frozen=True)
class LevyReport:
    ok: bool
    value: float
    reason: str = ""


def levy_integrability_check(gamma: Measure, tol: float = DEFAULT_TOL) -> LevyReport:
    """Check ``int s / (1 + s) gamma(ds) < inf`` and report its value."""
    for x, _ in gamma.atoms:
        if x == 0.0:
            return LevyReport(False, math.inf, "Levy measure has an atom at the origin")
    for p in gamma.pieces:
        if p.lower == 0.0 and p.singularity >= 2.0:
            return LevyReport(False, math.inf,
                              f"{p.name!r}: singularity exponent {p.singularity} >= 2 at 0")
        if math.isinf(p.upper) and p.tail.kind == "polynomial" and p.tail.rate <= 1.0:
            return LevyReport(False, math.inf, f"{p.name!r}: tail mass is infinite")
    try:
        value = integrate(gamma, lambda s: s / (1.0 + s), tol, q=1.0)
    except (NonIntegrable, ToleranceNotMet) as exc:
        return LevyReport(False, math.nan, str(exc))
    return LevyReport(True, float(value))


def restrict(mu: Measure, lo: float, hi: float) -> Measure:
    """The part of ``mu`` living on ``[lo, hi)``."""
    atoms = tuple((x, w) for x, w in mu.atoms if lo <= x < hi)
    pieces = []
    for p in mu.pieces:
        a, b = max(p.lower, lo), min(p.upper, hi)
        if a >= b:
            continue
        tail = p.tail if math.isinf(b) else Tail("compact")
        pieces.append(DensityPiece(p.density, a, b, p.singularity if a == 0.0 else 0.0,
                                   tail, p.name))
    return Measure(atoms, tuple(pieces), f"{mu.name}|[{lo:g},{hi:g})")


# -- catalog densities -------------------------------------------------------

def exp_density(rate: float = 1.0) -> Measure:
    """``exp(-rate s) ds`` on ``(0, inf)`` (not normalised)."""
    if rate <= 0:
        raise ValueError("rate must be positive")
    piece = DensityPiece(lambda s: np.exp(-rate * s), 0.0, math.inf, 0.0,
                         Tail("exponential", rate, 1.0), f"exp_density({rate:g})")
    return Measure((), (piece,), piece.name)


def gamma_density(t: float, rate: float = 1.0) -> Measure:
    """Probability density ``rate**t s**(t-1) exp(-rate s) / Gamma(t)``."""
    if t <= 0 or rate <= 0:
        raise ValueError("gamma density needs t > 0 and rate > 0")
    lg = math.lgamma(t)

    def dens(s):
        s = np.asarray(s, dtype=float)
        with np.errstate(divide="ignore"):
            return np.exp(t * math.log(rate) + (t - 1.0) * np.log(s) - rate * s - lg)

    if t <= 1.0:
        tail = Tail("exponential", rate, rate**t / math.gamma(t))
    else:
        # s**(t-1) e^{-rate s} <= max_s(s**(t-1) e^{-rate s / 2}) e^{-rate s / 2}
        peak = 2.0 * (t - 1.0) / rate
        log_scale = t * math.log(rate) + (t - 1.0) * math.log(peak) - 0.5 * rate * peak - lg
        tail = Tail("exponential", 0.5 * rate, math.exp(log_scale))
    piece = DensityPiece(dens, 0.0, math.inf, 1.0 - t, tail, f"gamma({t:g})")
    return Measure((), (piece,), piece.name)


def stable_levy(alpha: float = 0.5) -> Measure:
    """Levy measure of ``tau**alpha``: ``alpha / Gamma(1 - alpha) s**(-1-alpha)``."""
    if not 0.0 < alpha < 1.0:
        raise ValueError("stable Levy density needs 0 < alpha < 1")
    c = alpha / math.gamma(1.0 - alpha)
    piece = DensityPiece(lambda s: c * np.asarray(s, dtype=float) ** (-1.0 - alpha), 0.0,
                         math.inf, 1.0 + alpha, Tail("polynomial", 1.0 + alpha, c),
                         f"stable_levy({alpha:g})")
    return Measure((), (piece,), piece.name)


def stable_half(t: float) -> Measure:
    """Subordinator of ``sqrt``: ``t / (2 sqrt(pi)) s**-1.5 exp(-t**2 / (4 s))``."""
    if t <= 0:
        raise ValueError("stable_half needs t > 0")
    c = t / (2.0 * math.sqrt(math.pi))

    def dens(s):
        s = np.asarray(s, dtype=float)
        with np.errstate(divide="ignore", over="ignore"):
            return np.exp(math.log(c) - 1.5 * np.log(s) - t * t / (4.0 * s))

    piece = DensityPiece(dens, 0.0, math.inf, 0.0, Tail("polynomial", 1.5, c),
                         f"stable_half({t:g})")
    return Measure((), (piece,), piece.name)


def log_levy() -> Measure:
    """Levy measure of ``log(1 + tau)``: ``exp(-s) / s``."""
    piece = DensityPiece(lambda s: np.exp(-np.asarray(s, dtype=float)) / s, 0.0, math.inf,
                         1.0, Tail("exponential", 1.0, 1.0), "log_levy")
    return Measure((), (piece,), piece.name)


def bessel_compound(t: float) -> Measure:
    """Continuous part of the subordinator of ``tau / (1 + tau)``.

    Compound Poisson with unit rate and Exp(1) jumps:
    ``exp(-t - s) sqrt(t / s) I_1(2 sqrt(t s))``.
    """
    if t <= 0:
        raise ValueError("bessel_compound needs t > 0")

    def dens(s):
        s = np.asarray(s, dtype=float)
        r = np.sqrt(s)
        x = 2.0 * math.sqrt(t) * r
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = np.where(s > 0, math.sqrt(t) / np.where(r > 0, r, 1.0) * special.i1e(x), t)
        return ratio * np.exp(-(r - math.sqrt(t)) ** 2)

    # i1e <= 1/4 and (sqrt s - sqrt t)^2 >= s/2 - t
    tail = Tail("exponential", 0.5, 0.25 * math.sqrt(t) * math.exp(t))
    piece = DensityPiece(dens, 0.0, math.inf, 0.0, tail, f"bessel_compound({t:g})")
    return Measure((), (piece,), piece.name)


def uniform_density(lower: float = 0.0, upper: float = 1.0, height: float = 1.0) -> Measure:
    piece = DensityPiece(lambda s: np.full_like(np.asarray(s, dtype=float), height), lower,
                         upper, 0.0, Tail("compact"), f"uniform({lower:g},{upper:g})")
    return Measure((), (piece,), piece.name)


def power_density(p: float, lower: float = 0.0, upper: float = math.inf,
                  scale: float = 1.0) -> Measure:
    """``scale * s**-p``; polynomial tail when ``upper`` is infinite."""
    tail = Tail("polynomial", p, scale) if math.isinf(upper) else Tail("compact")
    piece = DensityPiece(lambda s: scale * np.asarray(s, dtype=float) ** (-p), lower, upper,
                         p if lower == 0.0 else 0.0, tail, f"power_density({p:g})")
    return Measure((), (piece,), piece.name)


def poisson_atoms(jump: float, rate: float, t: float, tol: float = DEFAULT_TOL) -> Measure:
    """``exp(-rate t) sum_k (rate t)**k / k! delta_{jump k}``, truncated at K.

    K is the smallest index with Poisson tail mass ``P(N > K) < tol``.
    """
    m = rate * t
    if m == 0.0:
        return dirac(0.0)
    if not tol > 0:
        raise ToleranceNotMet("a Poisson series needs a positive truncation tolerance")
    K = 0
    while special.pdtrc(K, m) >= tol:
        K += 1
    k = np.arange(K + 1)
    logw = -m + k * math.log(m) - special.gammaln(k + 1)
    atoms = tuple((jump * int(i), float(np.exp(lw))) for i, lw in zip(k, logw) if np.exp(lw) > 0)
    return Measure(atoms, (), f"poisson(c={jump:g},lambda={rate:g},t={t:g})")
