"""Functional calculus of matrix generators.

Three independent ways of producing operators are provided:

* quadrature against a measure (the Hille-Phillips integral for ``g(A)``,
  the operator Levy-Khintchine integral for ``psi(A)`` and the subordination
  integral for ``exp(-t psi(A))``);
* the spectral oracle ``S diag(f(lambda)) S^{-1}`` for structure-tagged
  generators;
* for bounded ``psi`` with an atomic Levy measure, the compound Poisson
  series.

Whenever two paths apply they can be cross-checked; unsupported
combinations raise instead of falling back to an uncertified method.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from scipy import special

from . import measures as ms
from .errors import (DivergentIntegral, PathDisagreement, ToleranceNotMet, Unsupported,
                     UnsupportedPsi)
from .functions import (BernsteinFunction, ClosedForm, CompletelyMonotoneFunction, bf_eval)
from .measures import Measure
from .records import BoundCheckRecord
from .semigroup import EXPM_NORM_BUDGET, MatrixGenerator, _norm_one, operator_norm

DEFAULT_TOL = 1e-10


# -- subordinators -------------------------------------------------------------

@dataclass(frozen=True)
class SubordinatorFamily:
    """``(mu_t)`` with ``int exp(-s tau) mu_t(ds) = exp(-t psi(tau))``."""

    psi: BernsteinFunction
    kind: str
    measure_at: Optional[Callable[[float, float], Measure]] = None

    def measure(self, t: float, tol: float = DEFAULT_TOL) -> Measure:
        if self.measure_at is None:
            raise UnsupportedPsi(f"no subordinator measure for {self.psi.name}")
        if t < 0:
            raise ValueError("t must be nonnegative")
        if t == 0:
            return ms.dirac(0.0)
        return self.measure_at(t, tol)


def _single_atom(loc: float, weight: float) -> Measure:
    return Measure(((loc, weight),), (), f"{weight:g}*delta({loc:g})")


def _compound_atoms(psi: BernsteinFunction, t: float, tol: float) -> Measure:
    """``exp(-t(a + |gamma|)) sum_k t**k gamma^{*k} / k!`` for atomic ``gamma``."""
    atoms = psi.gamma.atoms
    lam = sum(w for _, w in atoms)
    m = lam * t
    if not tol > 0:
        raise ToleranceNotMet("a compound Poisson series needs a positive truncation tolerance")
    K = 0
    while special.pdtrc(K, m) >= tol:
        K += 1
    pref = math.exp(-t * (psi.a + lam))
    total = {0.0: 1.0}
    power = {0.0: 1.0}
    for k in range(1, K + 1):
        nxt: dict = {}
        for x, w in power.items():
            for c, v in atoms:
                key = round(x + c, 12)
                nxt[key] = nxt.get(key, 0.0) + w * v * t / k
        power = nxt
        for x, w in power.items():
            total[x] = total.get(x, 0.0) + w
    items = tuple((x, pref * w) for x, w in sorted(total.items()) if pref * w > 0)
    return Measure(items, (), f"compound({psi.name},t={t:g})")


def subordinator_family(psi: BernsteinFunction) -> SubordinatorFamily:
    tag = psi.tag
    kind = tag[0] if tag else ""
    if kind == "power" and tag[1] == 0.5:
        return SubordinatorFamily(psi, "stable_half", lambda t, tol: ms.stable_half(t))
    if kind == "power" and tag[1] == 1.0:
        return SubordinatorFamily(psi, "drift", lambda t, tol: _single_atom(t, 1.0))
    if kind == "log1p":
        return SubordinatorFamily(psi, "gamma", lambda t, tol: ms.gamma_density(t))
    if kind == "bounded_exp":
        c, lam = tag[1], tag[2]
        return SubordinatorFamily(psi, "poisson",
                                  lambda t, tol: ms.poisson_atoms(c, lam, t, tol))
    if kind == "rational":
        return SubordinatorFamily(
            psi, "compound_poisson_exponential",
            lambda t, tol: _single_atom(0.0, math.exp(-t)) + ms.bessel_compound(t))
    if kind == "affine":
        a, b = tag[1], tag[2]
        return SubordinatorFamily(psi, "affine",
                                  lambda t, tol: _single_atom(b * t, math.exp(-t * a)))
    if psi.b == 0 and psi.gamma.is_atomic:
        return SubordinatorFamily(psi, "compound_poisson",
                                  lambda t, tol: _compound_atoms(psi, t, tol))
    return SubordinatorFamily(psi, "spectral_only", None)


def subordinator_measure(psi: BernsteinFunction, t: float, tol: float = DEFAULT_TOL) -> Measure:
    """``mu_t`` for catalog ``psi`` and for bounded ``psi`` with atomic Levy measure."""
    fam = subordinator_family(psi)
    if fam.measure_at is None:
        raise UnsupportedPsi(f"no subordinator construction for {psi.name}")
    return fam.measure(t, tol)


def _psi_vectorized(psi: BernsteinFunction, tol: float):
    def f(z):
        z = np.asarray(z)
        if psi.closed_form is not None:
            with np.errstate(divide="ignore", invalid="ignore"):
                return psi.closed_form.value(z)
        if not np.iscomplexobj(z):
            return psi.values(z, tol)
        return np.array([bf_eval(psi, complex(v), tol) for v in z.ravel()]).reshape(z.shape)
    return f


def exp_of_bf(psi: BernsteinFunction, t: float, tol: float = DEFAULT_TOL) -> CompletelyMonotoneFunction:
    """``g = exp(-t psi)``, completely monotone with ``nu = mu_t`` when available."""
    if t < 0:
        raise ValueError("t must be nonnegative")
    fam = subordinator_family(psi)
    nu = fam.measure(t, tol) if fam.measure_at is not None else None
    f = _psi_vectorized(psi, tol)
    far = 0.0 if math.isinf(psi.psi_infinity) else math.exp(-t * psi.psi_infinity)
    return CompletelyMonotoneFunction(nu, ClosedForm(lambda z: np.exp(-t * f(z))),
                                      f"exp-psi:{t:g}:{psi.name}",
                                      zero_plus=math.exp(-t * psi.a), at_infinity=far)


# -- operator integrals --------------------------------------------------------

def _needs_cut(G: MatrixGenerator, mu: Measure) -> bool:
    if G.structure == "selfadjoint_psd":
        return False
    return any(math.isinf(p.upper) and p.tail.kind == "polynomial" for p in mu.pieces)


def _decay_cut(G: MatrixGenerator, mu: Measure, tol: float) -> float:
    """``S`` with ``M ||exp(-S A)|| mu([S, inf)) <= tol / 4``.

    For ``s >= S``, ``||exp(-sA)|| <= M ||exp(-SA)||``, so the operator part of
    the tail is below the bound and only its scalar mass needs integrating.
    """
    S = 1.0 / max(operator_norm(G.A), 1e-300)
    while S * _norm_one(G.A) <= EXPM_NORM_BUDGET:
        decay = operator_norm(G.semigroup_batch(np.array([S]))[0])
        far = ms.restrict(mu, S, math.inf)
        if G.M * decay * far.total_mass <= 0.25 * tol:
            return S
        S *= 2.0
    raise ToleranceNotMet(f"exp(-sA) for {G.name} does not decay within the norm budget")


def operator_integral(G: MatrixGenerator, mu: Measure, kernel: str, tol: float = DEFAULT_TOL):
    """``int K(s) mu(ds)`` with ``K = exp(-sA)`` (``semigroup``) or ``I - exp(-sA)``."""
    if kernel == "semigroup":
        F, q = G.semigroup_batch, 0.0
    elif kernel == "one_minus":
        F, q = G.one_minus_batch, 1.0
    else:
        raise ValueError(f"unknown kernel {kernel!r}")
    n = G.n
    if mu.is_empty:
        return np.zeros((n, n))
    if not _needs_cut(G, mu):
        return np.asarray(ms.integrate(mu, F, tol, q=q))
    S = _decay_cut(G, mu, tol)
    near = ms.restrict(mu, 0.0, S)
    far = ms.restrict(mu, S, math.inf)
    out = np.asarray(ms.integrate(near, F, 0.5 * tol, q=q)) if not near.is_empty else np.zeros((n, n))
    if kernel == "one_minus" and not far.is_empty:
        out = out + far.total_mass * np.eye(n)
    return out


def hp_apply(g: CompletelyMonotoneFunction, G: MatrixGenerator, tol: float = DEFAULT_TOL,
             method: str = "measure") -> np.ndarray:
    """``g(A) = int exp(-sA) nu(ds)`` (``spectral`` uses the eigendecomposition)."""
    if method == "spectral":
        return G.spectral(g.closed_form.value(np.asarray(G.eigenvalues)))
    if g.nu is None:
        raise Unsupported(f"{g.name} has no representing measure")
    if math.isinf(g.g_zero_plus):
        raise DivergentIntegral(f"{g.name} is unbounded: nu has infinite mass")
    return operator_integral(G, g.nu, "semigroup", tol)


def _spectral_available(G: MatrixGenerator) -> bool:
    return G.S is not None


def _psi_on_spectrum(psi: BernsteinFunction, lam: np.ndarray, tol: float) -> np.ndarray:
    if np.iscomplexobj(lam) and np.any(lam.imag != 0):
        return _psi_vectorized(psi, tol)(lam.astype(complex))
    return np.asarray(psi.values(lam.real, tol), dtype=float)


def bf_of_generator(psi: BernsteinFunction, G: MatrixGenerator, method: str = "auto",
                    tol: float = DEFAULT_TOL) -> np.ndarray:
    """``psi(A) = aI + bA + int (I - exp(-sA)) gamma(ds)``.

    ``method`` is ``levy``, ``spectral``, ``auto`` (spectral when available)
    or ``cross`` (both, required to agree within ``10 tol (1 + ||psi(A)||)``).
    """
    if method == "auto":
        method = "spectral" if _spectral_available(G) else "levy"
    if method == "cross":
        lev = bf_of_generator(psi, G, "levy", tol)
        spe = bf_of_generator(psi, G, "spectral", tol)
        diff = operator_norm(lev - spe)
        if diff > 10 * tol * (1 + operator_norm(spe)):
            raise PathDisagreement(f"psi(A) levy vs spectral differ by {diff:.3g}")
        return spe
    n = G.n
    if psi.is_constant:
        return psi.a * np.eye(n)
    if method == "spectral":
        if not _spectral_available(G):
            raise Unsupported(f"spectral path needs a diagonalizable generator ({G.name})")
        return G.spectral(_psi_on_spectrum(psi, G.eigenvalues, tol))
    if method == "levy":
        out = psi.a * np.eye(n) + psi.b * G.A
        if not psi.gamma.is_empty:
            out = out + operator_integral(G, psi.gamma, "one_minus", tol)
        return out
    raise ValueError(f"unknown method {method!r}")


def available_paths(psi: BernsteinFunction, G: MatrixGenerator) -> list:
    paths = []
    if subordinator_family(psi).measure_at is not None:
        paths.append("measure")
    if _spectral_available(G):
        paths.append("spectral")
    if psi.b == 0 and psi.gamma.is_atomic:
        paths.append("compound")
    return paths


def _compound_series(psi: BernsteinFunction, G: MatrixGenerator, t: float, tol: float):
    """``exp(-t(a + |gamma|)) sum_k (t Gamma(A))**k / k!``, ``Gamma(A) = sum w exp(-cA)``.

    The series is summed at ``t / 2**j`` with ``t |gamma| M / 2**j <= 1`` and
    squared back. The remainder after ``K`` terms is at most
    ``exp(m - t|gamma|) P(N_m > K)`` with ``m = t |gamma| M``.
    """
    atoms = psi.gamma.atoms
    lam = sum(w for _, w in atoms)
    n = G.n
    Gam = np.zeros((n, n))
    for c, w in atoms:
        Gam = Gam + w * G.semigroup_batch(np.array([c]))[0]
    j = max(0, math.ceil(math.log2(max(t * lam * G.M, 1e-300)))) if lam > 0 else 0
    h = t / 2**j
    m = lam * h * G.M
    log_tol = math.log(tol / 2 ** (j + 1)) if tol > 0 else -math.inf
    K = 0
    while K < 200:
        tail = special.pdtrc(K, m)
        if tail <= 0 or math.log(tail) + m - lam * h < log_tol:
            break
        K += 1
    term = np.eye(n)
    total = np.eye(n)
    for k in range(1, K + 1):
        term = (h / k) * (term @ Gam)
        total = total + term
    E = math.exp(-h * (psi.a + lam)) * total
    for _ in range(j):
        E = E @ E
    return E


def subordinate_semigroup(psi: BernsteinFunction, G: MatrixGenerator, t: float,
                          method: str = "auto", tol: float = DEFAULT_TOL) -> np.ndarray:
    """``exp(-t psi(A)) = int exp(-sA) mu_t(ds)``.

    ``method``: ``measure``, ``spectral``, ``compound``, ``auto`` (spectral,
    then measure, then compound) or ``cross`` (every applicable path, required
    to agree within ``10 tol``).
    """
    if t < 0:
        raise ValueError("t must be nonnegative")
    n = G.n
    if t == 0:
        return np.eye(n)
    paths = available_paths(psi, G)
    if method == "auto":
        if not paths:
            raise Unsupported(f"no path for exp(-t {psi.name}(A)) on {G.name}")
        method = paths[1] if paths[0] == "measure" and "spectral" in paths else paths[0]
    if method == "cross":
        if len(paths) < 2:
            raise Unsupported(f"fewer than two paths for {psi.name} on {G.name}")
        results = [subordinate_semigroup(psi, G, t, p, tol) for p in paths]
        for p, r in zip(paths[1:], results[1:]):
            diff = operator_norm(r - results[0])
            if diff > 10 * tol * (1 + operator_norm(results[0])):
                raise PathDisagreement(f"{paths[0]} vs {p} differ by {diff:.3g}")
        return results[0]
    if method not in paths:
        raise Unsupported(f"path {method!r} does not apply to {psi.name} on {G.name}")
    if method == "spectral":
        vals = _psi_on_spectrum(psi, G.eigenvalues, tol)
        return G.spectral(np.exp(-t * vals))
    if method == "measure":
        return operator_integral(G, subordinator_measure(psi, t, tol), "semigroup", tol)
    return _compound_series(psi, G, t, tol)


def check_subordinated_generator(psi: BernsteinFunction, G: MatrixGenerator, h: float = 1e-3,
                                 tol: float = DEFAULT_TOL) -> BoundCheckRecord:
    """First-order consistency of ``(I - exp(-h psi(A))) / h`` with ``psi(A)``.

    The record compares the defect ratio between ``h`` and ``h / 10`` with
    10: ``lhs = |ratio - 10|`` against ``rhs = 2``. Defects at rounding level
    count as exact.
    """
    if not 0 < h <= 1e-2:
        raise ValueError("h must lie in (0, 1e-2]")
    P = bf_of_generator(psi, G, "auto", tol)
    scale = 1.0 + operator_norm(P)
    defects = []
    for step in (h, h / 10):
        E = subordinate_semigroup(psi, G, step, "auto", tol)
        defects.append(operator_norm((np.eye(G.n) - E) / step - P))
    if max(defects) <= 1e-9 * scale:
        lhs, ratio = 0.0, math.nan
    else:
        ratio = defects[0] / defects[1] if defects[1] > 0 else math.inf
        lhs = abs(ratio - 10.0)
    return BoundCheckRecord("subordinated_generator", lhs, 2.0, generator=G.name, psi=psi.name,
                            t=h, extra={"defect_h": defects[0], "defect_h10": defects[1],
                                        "ratio": ratio})


def check_subordination_contraction(psi: BernsteinFunction, G: MatrixGenerator, t_grid,
                                    tol: float = DEFAULT_TOL) -> BoundCheckRecord:
    """``sup_t ||exp(-t psi(A))|| <= M(A)``."""
    norms = [operator_norm(subordinate_semigroup(psi, G, t, "auto", tol)) for t in t_grid]
    return BoundCheckRecord("subordination_contraction", max(norms), G.M + tol,
                            generator=G.name, psi=psi.name, M=G.M)
