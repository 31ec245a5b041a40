"""Operator-norm inequality checks and the suite runner.

Every check returns a :class:`BoundCheckRecord` whose right-hand side is
assembled from the certified constants ``M``, ``c0`` and ``c1`` attached to
the generator and from ``J`` and ``C`` computed by the j-functional module.
The proof-backed constant ``K(A) = 2 max(2M, c1)`` multiplies the J-term
everywhere.

Checks raise :class:`PreconditionFailed` (or :class:`Unsupported`) when
their hypotheses do not hold, e.g. ``J[g, psi] = inf``. The suite runner
records those combinations as skipped; any other exception becomes a
failed record.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import functions as fn
from . import jfunctional as jf
from .calculus import bf_of_generator, exp_of_bf, hp_apply, subordinate_semigroup
from .errors import BFCalcError, ConfigError, PreconditionFailed, Unsupported
from .functions import BernsteinFunction, CompletelyMonotoneFunction, bf_derivative, bf_eval
from .records import BoundCheckRecord, passes
from .semigroup import MatrixGenerator, estimate_yosida, make_generator, operator_norm

DEFAULT_TOL = 1e-8
DEFAULT_SEED = 20240607
E_FACTOR = math.e / (math.e - 1.0)
LOG_SPECIAL_GRID = np.geomspace(1e-6, math.exp(-1.0), 13)

THEOREM_SUITES = ("main_theorem", "exp_corollary", "psi_decay", "holomorphy", "approximation",
                  "chernoff", "moment", "ok_corollary")
SUITES = ("scalar", "kernel", "jfunc") + THEOREM_SUITES
SUITE_GROUPS = {"theorems": THEOREM_SUITES, "all": SUITES}


def proof_constant(G: MatrixGenerator) -> float:
    """``2 max(2 M(A), c1)``."""
    return 2.0 * max(2.0 * G.M, G.c1)


def _constants(G: MatrixGenerator) -> dict:
    return {"M": G.M, "c0": G.c0, "c1": G.c1}


class Cache:
    """Memoised ``psi(A)``, ``g(A)``, ``J`` and ``C`` for one tolerance.

    Keys are object identities; the objects are kept alive by the cache so
    identities cannot be reused.
    """

    def __init__(self, tol: float = DEFAULT_TOL):
        self.tol = tol
        self._store: dict = {}

    def _get(self, kind, objs, compute):
        key = (kind,) + tuple(id(o) for o in objs)
        hit = self._store.get(key)
        if hit is None:
            hit = (compute(), objs)
            self._store[key] = hit
        return hit[0]

    def psi_of(self, psi: BernsteinFunction, G: MatrixGenerator) -> np.ndarray:
        return self._get("psi", (psi, G), lambda: bf_of_generator(psi, G, "auto", self.tol))

    def g_of(self, g: CompletelyMonotoneFunction, G: MatrixGenerator) -> np.ndarray:
        method = "measure" if g.nu is not None else "spectral"
        return self._get("g", (g, G), lambda: hp_apply(g, G, self.tol, method))

    def sub(self, psi: BernsteinFunction, G: MatrixGenerator, t: float) -> np.ndarray:
        return self._get(("sub", t), (psi, G),
                         lambda: subordinate_semigroup(psi, G, t, "auto", self.tol))

    def j(self, g: CompletelyMonotoneFunction, psi: BernsteinFunction) -> float:
        return self._get("j", (g, psi), lambda: jf.j_value(g, psi, self.tol))

    def c(self, c0: float, psi: BernsteinFunction) -> float:
        return self._get(("c", c0), (psi,), lambda: jf.c_constant(c0, psi, self.tol))

    def exp_family(self, phi: BernsteinFunction, t: float) -> CompletelyMonotoneFunction:
        return self._get(("expf", t), (phi,), lambda: exp_of_bf(phi, t, self.tol))


def _cache(cache, tol):
    return cache if cache is not None else Cache(tol)


def _finite_j(J: float, g_name: str, psi_name: str) -> float:
    if not math.isfinite(J):
        raise PreconditionFailed(f"J[{g_name}, {psi_name}] = inf")
    return J


# -- the theorem and its corollaries ------------------------------------------------

def check_main_theorem(psi: BernsteinFunction, g: CompletelyMonotoneFunction, G: MatrixGenerator,
                       tol: float = DEFAULT_TOL, cache: Cache | None = None,
                       label: str | None = None, t: float = math.nan) -> BoundCheckRecord:
    """``||psi(A) g(A)|| <= psi(0)||g(A)|| + K J[g, psi] + 4 M g(0+) C[c0; psi]``.

    ``extra`` reports the right-hand side with ``2 max(M, c1)`` in place of
    ``K`` and whether it holds too, and, when the spectral oracle applies,
    how far the spectral ``g(A)`` moves the left-hand side.
    """
    cache = _cache(cache, tol)
    g0 = g.g_zero_plus
    if not math.isfinite(g0):
        raise PreconditionFailed(f"{g.name} is unbounded")
    J = _finite_j(cache.j(g, psi), g.name, psi.name)
    P = cache.psi_of(psi, G)
    GA = cache.g_of(g, G)
    lhs = operator_norm(P @ GA)
    C = cache.c(G.c0, psi)
    first = psi.a * operator_norm(GA)
    last = 4.0 * G.M * g0 * C
    rhs = first + proof_constant(G) * J + last
    printed = first + 2.0 * max(G.M, G.c1) * J + last
    extra = {"printed_rhs": printed, "printed_holds": passes(lhs, printed)}
    if G.S is not None and g.closed_form is not None and g.nu is not None:
        GS = hp_apply(g, G, tol, "spectral")
        extra["lhs_spectral_delta"] = abs(operator_norm(P @ GS) - lhs)
    return BoundCheckRecord("main_theorem", lhs, rhs, generator=G.name, psi=psi.name,
                            g_or_phi=label or g.name, t=t, extra=extra, J=J, C=C,
                            **_constants(G))


def check_exp_corollary(psi: BernsteinFunction, phi: BernsteinFunction, G: MatrixGenerator,
                        t: float, tol: float = DEFAULT_TOL,
                        cache: Cache | None = None) -> BoundCheckRecord:
    """``||psi(A) exp(-t phi(A))|| <= psi(0)||E|| + K J[exp(-t phi), psi] + 4M exp(-t phi(0)) C``."""
    if not t > 0:
        raise ValueError("t must be positive")
    cache = _cache(cache, tol)
    g = cache.exp_family(phi, t)
    J = _finite_j(cache.j(g, psi), g.name, psi.name)
    E = cache.sub(phi, G, t)
    P = cache.psi_of(psi, G)
    lhs = operator_norm(P @ E)
    C = cache.c(G.c0, psi)
    rhs = (psi.a * operator_norm(E) + proof_constant(G) * J
           + 4.0 * G.M * math.exp(-t * phi.a) * C)
    return BoundCheckRecord("exp_corollary", lhs, rhs, generator=G.name, psi=psi.name,
                            g_or_phi=phi.name, t=t, J=J, C=C, **_constants(G))


def check_psi_decay(psi: BernsteinFunction, G: MatrixGenerator, t: float,
                    tol: float = DEFAULT_TOL, cache: Cache | None = None) -> BoundCheckRecord:
    """``||psi(A) exp(-tA)|| <= K psi(1/t) + 4 M C[c0; psi]``."""
    if not t > 0:
        raise ValueError("t must be positive")
    cache = _cache(cache, tol)
    P = cache.psi_of(psi, G)
    lhs = operator_norm(P @ G.semigroup_batch(np.array([t]))[0])
    C = cache.c(G.c0, psi)
    rhs = proof_constant(G) * bf_eval(psi, 1.0 / t, tol) + 4.0 * G.M * C
    return BoundCheckRecord("psi_decay", lhs, rhs, generator=G.name, psi=psi.name, t=t, C=C,
                            **_constants(G))


@dataclass
class HolomorphyReport:
    records: list
    yosida: tuple = (math.nan, math.nan)
    sup_record: BoundCheckRecord | None = None


def check_holomorphy_preservation(psi: BernsteinFunction, G: MatrixGenerator, t_grid,
                                  tol: float = DEFAULT_TOL, cache: Cache | None = None,
                                  estimate: bool = True) -> HolomorphyReport:
    """``||psi(A) exp(-t psi(A))|| <= M (psi(0) + 4C) exp(-t psi(0)) + K / t`` on ``t_grid``.

    For ``c0 = 0`` the report also carries the record
    ``sup_t t ||psi(A) exp(-t psi(A))|| <= K`` and, when ``estimate`` is set,
    the grid estimate of the Yosida pair of ``psi(A)``.
    """
    cache = _cache(cache, tol)
    P = cache.psi_of(psi, G)
    C = cache.c(G.c0, psi)
    K = proof_constant(G)
    records, scaled = [], []
    for t in t_grid:
        t = float(t)
        lhs = operator_norm(P @ cache.sub(psi, G, t))
        rhs = G.M * (psi.a + 4.0 * C) * math.exp(-t * psi.a) + K / t
        scaled.append(t * lhs)
        records.append(BoundCheckRecord("holomorphy", lhs, rhs, generator=G.name, psi=psi.name,
                                        t=t, C=C, **_constants(G)))
    report = HolomorphyReport(records)
    if estimate:
        psiG = make_generator(P, "general", f"{psi.name}({G.name})")
        report.yosida = estimate_yosida(psiG)
    if G.c0 == 0.0 and scaled:
        i = int(np.argmax(scaled))
        extra = {"t_argmax": float(t_grid[i]), "c0_estimate": report.yosida[0],
                 "c1_estimate": report.yosida[1]}
        report.sup_record = BoundCheckRecord("holomorphy_yosida", scaled[i], K, generator=G.name,
                                             psi=psi.name, extra=extra, C=C, **_constants(G))
    return report


def check_approximation_bound(psi: BernsteinFunction, phi: BernsteinFunction, G: MatrixGenerator,
                              t_grid, tol: float = DEFAULT_TOL,
                              cache: Cache | None = None) -> BoundCheckRecord:
    """``sup_t t ||psi(A) exp(-t phi(A))|| <= K [psi'(0)/phi'(1) + (psi(inf) - psi(1))/phi(1)]``."""
    if G.c0 != 0.0:
        raise PreconditionFailed(f"{G.name} is not sectorially bounded (c0 = {G.c0:g})")
    const = jf.bounded_psi_constant(psi, phi, tol)
    cache = _cache(cache, tol)
    P = cache.psi_of(psi, G)
    vals = [float(t) * operator_norm(P @ cache.sub(phi, G, float(t))) for t in t_grid]
    i = int(np.argmax(vals))
    return BoundCheckRecord("approximation", vals[i], proof_constant(G) * const, generator=G.name,
                            psi=psi.name, g_or_phi=phi.name,
                            extra={"t_argmax": float(t_grid[i]), "constant": const},
                            **_constants(G))


def check_chernoff_corollary(phi: BernsteinFunction, G: MatrixGenerator, t: float,
                             tol: float = DEFAULT_TOL,
                             cache: Cache | None = None) -> BoundCheckRecord:
    """``||(I - phi'(A)) exp(-t phi(A))|| <= (K/t)[|phi''(0+)|/phi'(1) + phi'(1)/phi(1)]``."""
    if not t > 0:
        raise ValueError("t must be positive")
    cache = _cache(cache, tol)
    psi = cache._get("one_minus", (phi,), lambda: fn.one_minus_derivative_bf(phi))
    d1 = bf_derivative(phi, 1.0, tol)
    const = abs(phi.second_derivative_at_zero) / d1 + d1 / bf_eval(phi, 1.0, tol)
    P = cache.psi_of(psi, G)
    lhs = operator_norm(P @ cache.sub(phi, G, t))
    rhs = proof_constant(G) / t * const
    return BoundCheckRecord("chernoff", lhs, rhs, generator=G.name, psi=psi.name,
                            g_or_phi=phi.name, t=t, extra={"constant": const}, **_constants(G))


def check_moment_inequality(psi: BernsteinFunction, G: MatrixGenerator, x,
                            tol: float = DEFAULT_TOL, cache: Cache | None = None,
                            label: str = "") -> BoundCheckRecord:
    """``||psi(A) x|| <= (2e/(e-1)) M psi(||Ax|| / (2||x||)) ||x||``."""
    x = np.asarray(x)
    nx = float(np.linalg.norm(x))
    if nx == 0.0:
        raise ValueError("x must be nonzero")
    cache = _cache(cache, tol)
    P = cache.psi_of(psi, G)
    lhs = float(np.linalg.norm(P @ x))
    arg = float(np.linalg.norm(G.A @ x)) / (2.0 * nx)
    rhs = 2.0 * E_FACTOR * G.M * bf_eval(psi, arg, tol) * nx
    extra = {"x": label} if label else {}
    return BoundCheckRecord("moment", lhs, rhs, generator=G.name, psi=psi.name, extra=extra,
                            **_constants(G))


def window_constant(G: MatrixGenerator, a_window: float) -> float:
    """Certified ``M_a >= sup_{t <= a} t ||A exp(-tA)||``, namely ``c1 + c0 a``."""
    if not a_window > 0:
        raise ValueError("the window must be positive")
    if math.isinf(a_window):
        if G.c0 != 0.0:
            raise PreconditionFailed(f"{G.name} has c0 > 0: only finite windows are certified")
        return G.c1
    return G.c1 + G.c0 * a_window


def check_ok_corollary(psi: BernsteinFunction, G: MatrixGenerator, t: float,
                       a_window: float = math.inf, tol: float = DEFAULT_TOL,
                       cache: Cache | None = None) -> BoundCheckRecord:
    """``||psi(A) exp(-tA)|| <= (e/(e-1)) M max(2M, M_a) psi(1/t)`` for ``t in (0, a]``."""
    if not 0 < t <= a_window:
        raise ValueError("t must lie in (0, a]")
    M_a = window_constant(G, a_window)
    cache = _cache(cache, tol)
    P = cache.psi_of(psi, G)
    lhs = operator_norm(P @ G.semigroup_batch(np.array([t]))[0])
    rhs = E_FACTOR * G.M * max(2.0 * G.M, M_a) * bf_eval(psi, 1.0 / t, tol)
    return BoundCheckRecord("ok_corollary", lhs, rhs, generator=G.name, psi=psi.name, t=t,
                            extra={"a": a_window, "M_a": M_a}, **_constants(G))


def check_ok_log_special(G: MatrixGenerator, t_grid=LOG_SPECIAL_GRID, a_window: float = math.inf,
                         tol: float = DEFAULT_TOL, cache: Cache | None = None) -> BoundCheckRecord:
    """``sup_t ||log(1+A) exp(-tA)|| / log(1/t)`` over ``t_grid`` in ``(0, 1/e]``.

    The bound is the corollary constant times ``log(1 + 1/t) / log(1/t)`` at
    the smallest grid point.
    """
    t_grid = np.asarray(t_grid, dtype=float)
    if t_grid.size == 0 or t_grid.min() <= 0 or t_grid.max() > math.exp(-1.0) * (1 + 1e-15):
        raise ValueError("the grid must lie in (0, 1/e]")
    if t_grid.max() > a_window:
        raise ValueError("the grid must lie in the window (0, a]")
    M_a = window_constant(G, a_window)
    cache = _cache(cache, tol)
    psi = cache._get("log1p", (), fn.log1p)
    P = cache.psi_of(psi, G)
    ratios = [operator_norm(P @ E) / math.log(1.0 / t)
              for t, E in zip(t_grid, G.semigroup_batch(t_grid))]
    i = int(np.argmax(ratios))
    t0 = float(t_grid.min())
    const = E_FACTOR * G.M * max(2.0 * G.M, M_a)
    rhs = const * math.log1p(1.0 / t0) / math.log(1.0 / t0)
    return BoundCheckRecord("ok_log_special", ratios[i], rhs, generator=G.name, psi=psi.name,
                            t=float(t_grid[i]),
                            extra={"t_min": t0, "constant": const, "M_a": M_a},
                            **_constants(G))


# -- configuration --------------------------------------------------------------

@dataclass(frozen=True)
class GridSpec:
    min: float
    max: float
    points: int
    scale: str = "log"

    def __post_init__(self):
        if not (self.min > 0 and self.max >= self.min):
            raise ConfigError(f"grid needs 0 < min <= max, got {self.min}..{self.max}")
        if self.points < 2:
            raise ConfigError("grid needs at least 2 points")
        if self.scale not in ("log", "linear"):
            raise ConfigError(f"grid scale must be log or linear, got {self.scale!r}")

    def values(self) -> np.ndarray:
        if self.scale == "log":
            return np.geomspace(self.min, self.max, self.points)
        return np.linspace(self.min, self.max, self.points)

    @classmethod
    def parse(cls, value) -> "GridSpec":
        """From ``{min, max, points, scale}`` or the string ``min:max:points``."""
        try:
            if isinstance(value, str):
                parts = value.split(":")
                if len(parts) != 3:
                    raise ConfigError(f"grid {value!r} must be min:max:points")
                return cls(float(parts[0]), float(parts[1]), int(parts[2]))
            if isinstance(value, dict):
                unknown = set(value) - {"min", "max", "points", "scale"}
                if unknown:
                    raise ConfigError(f"unknown grid keys {sorted(unknown)}")
                return cls(float(value["min"]), float(value["max"]), int(value["points"]),
                           str(value.get("scale", "log")))
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, ConfigError):
                raise
            raise ConfigError(f"bad grid {value!r}: {exc}") from exc
        raise ConfigError(f"bad grid {value!r}")

    def as_dict(self) -> dict:
        return {"min": self.min, "max": self.max, "points": self.points, "scale": self.scale}


DEFAULT_FUNCTIONS = ("power:0.5", "log1p", "bounded_exp:c=1,lambda=1", "rational",
                     "affine:a=0.5,b=1", "constant:a=1")
DEFAULT_G = ("exp", "gamma", "exp-psi:power:0.5", "exp-psi:bounded_exp:c=1,lambda=1")
DEFAULT_PHI = ("power:1", "power:0.5", "log1p", "bounded_exp:c=1,lambda=1")
DEFAULT_GENERATORS = ("laplacian:n=16", "diag:1,2,5", "similarity:n=8,kappa=10,seed=0")


@dataclass
class RunConfig:
    suites: list = field(default_factory=lambda: list(SUITES))
    function_specs: list = field(default_factory=lambda: list(DEFAULT_FUNCTIONS))
    g_specs: list = field(default_factory=lambda: list(DEFAULT_G))
    phi_specs: list = field(default_factory=lambda: list(DEFAULT_PHI))
    generator_specs: list = field(default_factory=lambda: list(DEFAULT_GENERATORS))
    t_grid: GridSpec = field(default_factory=lambda: GridSpec(1e-2, 1e2, 13))
    s_grid: GridSpec = field(default_factory=lambda: GridSpec(1e-2, 1e2, 13))
    tolerance: float = DEFAULT_TOL
    seed: int = DEFAULT_SEED
    half_plane_points: int = 1000
    moment_vectors: int = 8
    output: dict = field(default_factory=dict)

    _KEYS = ("suites", "function_specs", "g_specs", "phi_specs", "generator_specs", "t_grid",
             "s_grid", "tolerance", "seed", "half_plane_points", "moment_vectors", "output")

    def __post_init__(self):
        # tolerance 0 is admitted as the forced-failure mode
        if not (isinstance(self.tolerance, (int, float)) and 0 <= self.tolerance <= 1e-2):
            raise ConfigError(f"tolerance must lie in [0, 1e-2], got {self.tolerance!r}")
        self.tolerance = float(self.tolerance)
        for name in ("function_specs", "g_specs", "phi_specs", "generator_specs", "suites"):
            if not isinstance(getattr(self, name), list):
                raise ConfigError(f"{name} must be a list")
        for s in self.suites:
            if s not in SUITES and s not in SUITE_GROUPS:
                raise ConfigError(f"unknown suite {s!r}")
        if not isinstance(self.seed, int) or isinstance(self.seed, bool):
            raise ConfigError("seed must be an integer")
        if not isinstance(self.output, dict) or set(self.output) - {"csv", "json", "plotdata"}:
            raise ConfigError("output keys are csv, json and plotdata")
        for name in ("half_plane_points", "moment_vectors"):
            v = getattr(self, name)
            if not isinstance(v, int) or v < 0:
                raise ConfigError(f"{name} must be a nonnegative integer")

    @classmethod
    def from_dict(cls, d: dict) -> "RunConfig":
        if not isinstance(d, dict):
            raise ConfigError("a config must be a mapping")
        unknown = set(d) - set(cls._KEYS)
        if unknown:
            raise ConfigError(f"unknown config keys {sorted(unknown)}")
        kw = dict(d)
        for g in ("t_grid", "s_grid"):
            if g in kw:
                kw[g] = GridSpec.parse(kw[g])
        return cls(**kw)

    def expanded_suites(self) -> list:
        out = []
        for s in self.suites:
            for name in SUITE_GROUPS.get(s, (s,)):
                if name not in out:
                    out.append(name)
        return out

    def as_dict(self) -> dict:
        return {"suites": list(self.suites), "function_specs": list(self.function_specs),
                "g_specs": list(self.g_specs), "phi_specs": list(self.phi_specs),
                "generator_specs": list(self.generator_specs),
                "t_grid": self.t_grid.as_dict(), "s_grid": self.s_grid.as_dict(),
                "tolerance": self.tolerance, "seed": self.seed,
                "half_plane_points": self.half_plane_points,
                "moment_vectors": self.moment_vectors, "output": dict(self.output)}


# -- suites ---------------------------------------------------------------------

@dataclass
class Skip:
    inequality_id: str
    params: str
    reason: str


class _Runner:
    def __init__(self, cfg: RunConfig, psis, gfams, phis, gens):
        from . import specs
        self.cfg = cfg
        self.tol = cfg.tolerance
        self.cache = Cache(self.tol)
        self.psis, self.phis, self.gens = psis, phis, gens
        self.gfams = [(label, specs.parse_g_family(label)) for label in gfams]
        self.ts = [float(t) for t in cfg.t_grid.values()]
        self.ss = [float(s) for s in cfg.s_grid.values()]
        self.records: list = []
        self.skipped: list = []

    def attempt(self, ident: str, params: str, fnc):
        try:
            out = fnc()
        except (PreconditionFailed, Unsupported) as exc:
            self.skipped.append(Skip(ident, params, str(exc)))
            return
        except (BFCalcError, ArithmeticError, ValueError, np.linalg.LinAlgError) as exc:
            self.records.append(BoundCheckRecord.failure(
                ident, f"{type(exc).__name__}: {exc}", **_failure_fields(params)))
            return
        if isinstance(out, BoundCheckRecord):
            self.records.append(out)
        else:
            self.records.extend(out)

    # individual suites

    def scalar(self):
        rng = np.random.default_rng(self.cfg.seed)
        n = self.cfg.half_plane_points
        mod = 10.0 ** rng.uniform(-3.0, 3.0, n)
        ang = rng.uniform(-0.5 * math.pi, 0.5 * math.pi, n)
        zs = mod * np.exp(1j * ang)
        taus = fn.log_grid(1e-4, 1e4, 9)
        sector_g = [fn.exp_cm(1.0), fn.gamma_cm(1.0)]
        betas = (math.pi / 6, math.pi / 4, math.pi / 3)
        for psi in self.psis:
            p = f"psi={psi.name}"
            self.attempt("bernstein_invariants", p, lambda: _invariant_record(psi, self.tol))
            for c in (1.0, 2.0, 10.0, 100.0):
                for tau in taus:
                    self.attempt("scaling_law", p, lambda: fn.check_scaling_law(psi, c, tau, self.tol))
            for z in zs:
                self.attempt("half_plane", p, lambda: fn.check_half_plane_bound(psi, z, self.tol))
            for g in sector_g:
                for beta in betas:
                    for z in (1.0, 3.0 * np.exp(0.5j * beta), 10.0 * np.exp(1j * beta)):
                        self.attempt("sector", f"{p};g_or_phi={g.name}",
                                     lambda: fn.check_sector_product_bound(
                                         g, psi, beta, z, self.cache.j(g, psi), self.tol))

    def kernel(self):
        for G in self.gens:
            p = f"generator={G.name}"
            for t in self.ts:
                E = G.semigroup_batch(np.array([t]))[0]
                self.records.append(BoundCheckRecord(
                    "semigroup_bound", operator_norm(E), G.M, generator=G.name, t=t,
                    **_constants(G)))
                self.records.append(BoundCheckRecord(
                    "yosida_condition", operator_norm(G.A @ E), G.c0 + G.c1 / t,
                    generator=G.name, t=t, **_constants(G)))
                for s in self.ss:
                    self.attempt("difference_kernel", p,
                                 lambda: _kernel_check(G, s, t))
                self.attempt("converse_yosida", p, lambda: _converse_check(G, t))

    def jfunc(self):
        tol = self.tol
        for psi in self.psis:
            p = f"psi={psi.name}"
            for t in (0.1, 1.0, 10.0):
                self.attempt("j_closed_form", p, lambda: _j_closed_form_record(psi, t, tol, self.cache))
                self.attempt("j_bound_linear", p, lambda: _j_linear_record(psi, t, tol, self.cache))
                for alpha in (0.5, 1.0):
                    self.attempt("j_bound_power", p,
                                 lambda: _j_power_record(psi, alpha, t, tol, self.cache))
                if psi.is_bounded and psi.a == 0.0:
                    for phi in self.phis:
                        self.attempt("j_bound_bounded_psi", f"{p};phi={phi.name}",
                                     lambda: _j_bounded_record(psi, phi, t, tol, self.cache))
            for c0 in (0.1, 1.0, 10.0):
                self.attempt("c_paths", p, lambda: _c_paths_record(psi, c0, tol))
            self.attempt("j_reconstruct_q", p, lambda: _reconstruct_record(psi, tol, self.cache))

    def main_theorem(self):
        for G in self.gens:
            for psi in self.psis:
                for label, fam in self.gfams:
                    for t in self.ts:
                        g = self.cache._get(("gfam", label, t), (), lambda: fam(t))
                        self.attempt("main_theorem", _p(G, psi, label, t),
                                     lambda: check_main_theorem(psi, g, G, self.tol, self.cache,
                                                                label, t))

    def exp_corollary(self):
        for G in self.gens:
            for psi in self.psis:
                for phi in self.phis:
                    for t in self.ts:
                        self.attempt("exp_corollary", _p(G, psi, phi.name, t),
                                     lambda: check_exp_corollary(psi, phi, G, t, self.tol, self.cache))

    def psi_decay(self):
        for G in self.gens:
            for psi in self.psis:
                for t in self.ts:
                    self.attempt("psi_decay", _p(G, psi, "", t),
                                 lambda: check_psi_decay(psi, G, t, self.tol, self.cache))

    def holomorphy(self):
        for G in self.gens:
            for psi in self.psis:
                def run():
                    rep = check_holomorphy_preservation(psi, G, self.ts, self.tol, self.cache)
                    return rep.records + ([rep.sup_record] if rep.sup_record else [])
                self.attempt("holomorphy", _p(G, psi, "", math.nan), run)

    def approximation(self):
        for G in self.gens:
            for psi in self.psis:
                for phi in self.phis:
                    self.attempt("approximation", _p(G, psi, phi.name, math.nan),
                                 lambda: check_approximation_bound(psi, phi, G, self.ts, self.tol,
                                                                   self.cache))

    def chernoff(self):
        for G in self.gens:
            for phi in self.phis:
                for t in self.ts:
                    self.attempt("chernoff", f"generator={G.name};g_or_phi={phi.name};t={t!r}",
                                 lambda: check_chernoff_corollary(phi, G, t, self.tol, self.cache))

    def moment(self):
        for G in self.gens:
            rng = np.random.default_rng([self.cfg.seed, G.n])
            vectors = []
            if G.S is not None:
                vectors += [(f"eig{k}", G.S[:, k]) for k in range(G.n)]
            for k in range(self.cfg.moment_vectors):
                x = rng.standard_normal(G.n)
                vectors.append((f"rand{k}", x / np.linalg.norm(x)))
            for psi in self.psis:
                for label, x in vectors:
                    self.attempt("moment", _p(G, psi, "", math.nan),
                                 lambda: check_moment_inequality(psi, G, x, self.tol, self.cache,
                                                                 label))

    def ok_corollary(self):
        for G in self.gens:
            a = math.inf if G.c0 == 0.0 else 1.0
            for psi in self.psis:
                for t in self.ts:
                    if t <= a:
                        self.attempt("ok_corollary", _p(G, psi, "", t),
                                     lambda: check_ok_corollary(psi, G, t, a, self.tol, self.cache))
            self.attempt("ok_log_special", f"generator={G.name}",
                         lambda: check_ok_log_special(G, LOG_SPECIAL_GRID, a, self.tol, self.cache))


def _p(G, psi, other, t) -> str:
    parts = [f"generator={G.name}", f"psi={psi.name}"]
    if other:
        parts.append(f"g_or_phi={other}")
    if not math.isnan(t):
        parts.append(f"t={t!r}")
    return ";".join(parts)


def _failure_fields(params: str) -> dict:
    kw: dict = {}
    for item in params.split(";"):
        key, _, value = item.partition("=")
        if key in ("generator", "psi", "g_or_phi"):
            kw[key] = value
        elif key == "t":
            kw["t"] = float(value)
    return kw


def _invariant_record(psi, tol):
    rep = fn.check_bernstein_invariants(psi, max(tol, 1e-10))
    return BoundCheckRecord("bernstein_invariants", float(len(rep.failures)), 0.0, psi=psi.name,
                            extra={"failures": "|".join(rep.failures)} if rep.failures else {})


def _kernel_check(G, s, t):
    from .semigroup import difference_kernel_check
    return difference_kernel_check(G, s, t)


def _converse_check(G, t):
    from .semigroup import converse_yosida_probe
    return converse_yosida_probe(G, t)


def _j_closed_form_record(psi, t, tol, cache):
    g = cache.exp_family(psi, t)
    J = cache.j(g, psi)
    exact = jf.j_closed_form_exp(psi, t)
    return BoundCheckRecord("j_closed_form", abs(J - exact), 2.0 * tol, psi=psi.name,
                            g_or_phi=f"exp-psi:{psi.name}", t=t, J=J,
                            extra={"closed_form": exact})


def _j_linear_record(psi, t, tol, cache):
    g = cache._get(("exp", t), (), lambda: fn.exp_cm(t))
    J = _finite_j(cache.j(g, psi), g.name, psi.name)
    bound = jf.j_bound_linear(psi, t, sharp=True)
    return BoundCheckRecord("j_bound_linear", J, bound + tol, psi=psi.name, g_or_phi="exp", t=t,
                            J=J, extra={"plain_bound": jf.j_bound_linear(psi, t)})


def _j_power_record(psi, alpha, t, tol, cache):
    phi = cache._get(("power", alpha), (), lambda: fn.power(alpha))
    g = cache.exp_family(phi, t)
    J = _finite_j(cache.j(g, psi), g.name, psi.name)
    bound = jf.j_bound_power(psi, alpha, t, "corrected")
    stated = jf.j_bound_power(psi, alpha, t, "stated")
    extra = {"alpha": alpha, "stated_bound": stated, "stated_holds": passes(J, stated + tol)}
    return BoundCheckRecord("j_bound_power", J, bound + tol, psi=psi.name,
                            g_or_phi=f"exp-psi:{phi.name}", t=t, J=J, extra=extra)


def _j_bounded_record(psi, phi, t, tol, cache):
    g = cache.exp_family(phi, t)
    J = _finite_j(cache.j(g, psi), g.name, psi.name)
    bound = jf.j_bound_bounded_psi(psi, phi, t, tol)
    return BoundCheckRecord("j_bound_bounded_psi", J, bound + tol, psi=psi.name,
                            g_or_phi=phi.name, t=t, J=J,
                            extra={"crude_bound": jf.j_bound_bounded_psi(psi, phi, t, tol, True)})


def _c_paths_record(psi, c0, tol):
    direct, triple = jf.c_constant_paths(c0, psi, tol)
    return BoundCheckRecord("c_paths", abs(direct - triple), 2.0 * tol, psi=psi.name, C=triple,
                            extra={"c0": c0, "direct": direct})


def _reconstruct_record(psi, tol, cache):
    g = cache._get(("exp", 1.0), (), lambda: fn.exp_cm(1.0))
    J = _finite_j(cache.j(g, psi), g.name, psi.name)
    via_q = jf.integrate_reconstructed_q(g, psi, tol)
    return BoundCheckRecord("j_reconstruct_q", abs(via_q - J), 5.0 * tol, psi=psi.name,
                            g_or_phi=g.name, J=J, extra={"integral_of_q": via_q})


def run_suite(config: RunConfig, skipped: list | None = None) -> list:
    """Run the configured suites in config order and return their records.

    Combinations whose hypotheses fail are appended to ``skipped`` (when
    given) instead of producing records.
    """
    from . import specs
    suites = config.expanded_suites()
    if not suites:
        return []
    try:
        psis = [specs.parse_psi(s) for s in config.function_specs]
        phis = [specs.parse_psi(s) for s in config.phi_specs]
        gens = [specs.parse_generator(s) for s in config.generator_specs]
        for label in config.g_specs:
            specs.parse_g_family(label)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    runner = _Runner(config, psis, config.g_specs, phis, gens)
    with np.errstate(all="ignore"):
        for name in suites:
            getattr(runner, name)()
    if skipped is not None:
        skipped.extend(runner.skipped)
    return runner.records
