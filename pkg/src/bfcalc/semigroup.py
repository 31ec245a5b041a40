"""Matrix semigroups ``exp(-tA)`` and their constants.

``M(A) = sup_t ||exp(-tA)||`` and the Yosida pair ``(c0, c1)`` with
``||A exp(-tA)|| <= c0 + c1 / t`` are attached to every generator. For
structure-tagged matrices they are certified upper bounds derived from the
eigendecomposition; for general matrices they are grid estimates and the
generator is flagged as uncertified.

All norms are spectral norms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np
import scipy.linalg
from scipy.optimize import minimize_scalar

from .errors import MatrixOverflow
from .records import BoundCheckRecord

EXPM_NORM_BUDGET = 1e6
C1_FLOOR = 1e-12
SMALL_ARG = 1e-4


class YosidaPair(NamedTuple):
    c0: float
    c1: float


def operator_norm(M) -> float:
    """Largest singular value."""
    M = np.asarray(M)
    if M.size == 0:
        return 0.0
    if M.ndim == 0:
        return float(abs(M))
    return float(np.linalg.norm(M, 2))


def _norm_one(M) -> float:
    return float(np.abs(M).sum(axis=-2).max(axis=-1).max()) if np.size(M) else 0.0


def expm(M) -> np.ndarray:
    """Matrix exponential (Pade scaling and squaring; spectral for Hermitian)."""
    M = np.asarray(M)
    if not np.all(np.isfinite(M)):
        raise ValueError("expm needs finite entries")
    if M.ndim == 2 and M.shape[0] and _norm_one(M) > EXPM_NORM_BUDGET:
        raise MatrixOverflow(f"||M||_1 = {_norm_one(M):.3g} exceeds the budget {EXPM_NORM_BUDGET:g}")
    if M.ndim == 2 and M.shape[0] and np.allclose(M, M.conj().T, rtol=0, atol=1e-14 * (1 + _norm_one(M))):
        lam, V = np.linalg.eigh(0.5 * (M + M.conj().T))
        return (V * np.exp(lam)) @ V.conj().T
    return scipy.linalg.expm(M)


def _kappa(S) -> float:
    return float(np.linalg.cond(S))


@dataclass(frozen=True, eq=False)
class MatrixGenerator:
    """A square matrix ``A`` (``-A`` generates ``exp(-tA)``) and cached constants.

    Build instances with :func:`make_generator` or the catalog constructors.
    """

    A: np.ndarray
    structure: str
    name: str
    eigenvalues: np.ndarray
    S: Optional[np.ndarray]
    S_inv: Optional[np.ndarray]
    M: float
    c0: float
    c1: float
    certified: bool

    @property
    def n(self) -> int:
        return self.A.shape[0]

    @property
    def yosida(self) -> YosidaPair:
        return YosidaPair(self.c0, self.c1)

    @property
    def norm(self) -> float:
        return operator_norm(self.A)

    @property
    def sectorially_bounded(self) -> bool:
        return self.c0 == 0.0

    def spectral(self, values) -> np.ndarray:
        """``S diag(values) S^{-1}`` for values on the eigenvalues."""
        if self.S is None:
            raise ValueError(f"{self.name} has no eigendecomposition")
        values = np.asarray(values)
        out = (self.S * values) @ self.S_inv
        if not np.iscomplexobj(self.A) and np.iscomplexobj(out):
            if np.max(np.abs(out.imag), initial=0.0) <= 1e-10 * (1 + np.max(np.abs(out.real), initial=0.0)):
                out = out.real
        return out

    def semigroup_batch(self, ts) -> np.ndarray:
        """``exp(-t A)`` for every ``t`` in ``ts`` (shape ``(len(ts), n, n)``)."""
        ts = np.asarray(ts, dtype=float)
        if self.structure == "selfadjoint_psd":
            E = np.exp(-np.outer(ts, self.eigenvalues.real))
            return np.einsum("ij,kj,lj->kil", self.S, E, self.S.conj())
        big = ts * _norm_one(self.A)
        if np.any(big > EXPM_NORM_BUDGET):
            raise MatrixOverflow(f"t ||A|| = {big.max():.3g} exceeds the budget")
        return scipy.linalg.expm(-ts[:, None, None] * self.A[None, :, :])

    def one_minus_batch(self, ss) -> np.ndarray:
        """``I - exp(-s A)`` without cancellation for small ``s ||A||``."""
        ss = np.asarray(ss, dtype=float)
        if self.structure == "selfadjoint_psd":
            E = -np.expm1(-np.outer(ss, self.eigenvalues.real))
            return np.einsum("ij,kj,lj->kil", self.S, E, self.S.conj())
        out = np.eye(self.n)[None] - self.semigroup_batch(ss)
        small = ss * _norm_one(self.A) < SMALL_ARG
        if np.any(small):
            sA = ss[small, None, None] * self.A[None]
            sA2 = sA @ sA
            out[small] = sA - 0.5 * sA2 + (sA2 @ sA) / 6.0
        return out


def semigroup_at(G: MatrixGenerator, t: float) -> np.ndarray:
    """``exp(-t A)``."""
    if t < 0:
        raise ValueError("t must be nonnegative")
    if t == 0:
        return np.eye(G.n, dtype=G.A.dtype)
    return G.semigroup_batch(np.array([t]))[0]


def default_t_grid(points: int = 200) -> np.ndarray:
    return np.geomspace(1e-4, 1e4, points)


def estimate_M(G: MatrixGenerator, grid=None) -> float:
    """``max_{t in {0} u grid} ||exp(-tA)||``; a lower estimate of the true sup."""
    if G.structure == "selfadjoint_psd":
        return 1.0
    grid = default_t_grid() if grid is None else np.asarray(grid, dtype=float)
    grid = grid[grid * _norm_one(G.A) <= EXPM_NORM_BUDGET]
    norms = [operator_norm(E) for E in G.semigroup_batch(grid)]
    return max([1.0] + norms)


def _ae_norms(G: MatrixGenerator, ts) -> np.ndarray:
    return np.array([operator_norm(G.A @ E) for E in G.semigroup_batch(ts)])


def estimate_yosida(G: MatrixGenerator, grid=None) -> YosidaPair:
    """Grid estimate of the Yosida pair.

    ``c1`` is the largest ``t ||A exp(-tA)||`` over the grid points in
    ``(0, 1]``, refined around the best grid points by a bounded scalar
    search. ``c0`` is the smallest constant making ``||A exp(-tA)|| <= c0 +
    c1 / t`` hold at the grid points in ``[1, inf)``; values below rounding
    level are clamped to zero.
    """
    grid = default_t_grid() if grid is None else np.asarray(grid, dtype=float)
    grid = grid[grid * _norm_one(G.A) <= EXPM_NORM_BUDGET]
    scale = max(operator_norm(G.A), 1e-300)
    if operator_norm(G.A) == 0.0:
        return YosidaPair(0.0, C1_FLOOR)
    small = grid[grid <= 1.0]
    large = grid[grid >= 1.0]
    c1 = 0.0
    if small.size:
        vals = small * _ae_norms(G, small)
        c1 = float(vals.max())
        order = np.argsort(vals)[::-1][:3]
        for i in order:
            lo = small[max(i - 1, 0)]
            hi = small[min(i + 1, small.size - 1)]
            if hi <= lo:
                continue
            res = minimize_scalar(lambda u: -math.exp(u) * _ae_norms(G, [math.exp(u)])[0],
                                  bounds=(math.log(lo), math.log(hi)), method="bounded",
                                  options={"xatol": 1e-10})
            c1 = max(c1, float(-res.fun))
    c1 = max(c1, C1_FLOOR)
    c0 = 0.0
    if large.size:
        resid = _ae_norms(G, large) - c1 / large
        c0 = float(max(resid.max(), 0.0))
        if c0 <= 64 * np.finfo(float).eps * scale:
            c0 = 0.0
    # the defining inequality must hold on the whole grid
    norms = _ae_norms(G, grid)
    assert np.all(norms <= (c0 + c1 / grid) * (1 + 1e-12) + 64 * np.finfo(float).eps * scale)
    return YosidaPair(c0, c1)


def _certified_constants(structure, lam, S, S_inv):
    if structure == "selfadjoint_psd":
        nonzero = np.any(np.abs(lam) > 0)
        return 1.0, 0.0, (math.exp(-1.0) if nonzero else C1_FLOOR)
    kappa = _kappa(S)
    nz = np.abs(lam) > 0
    if not np.any(nz):
        return max(1.0, kappa), 0.0, C1_FLOOR
    re = lam.real[nz]
    if np.any(re <= 0):
        # purely imaginary nonzero eigenvalues: bounded but not holomorphic
        return max(1.0, kappa), math.inf, math.inf
    c1 = kappa * float(np.max(np.abs(lam[nz]) / re)) / math.e
    return max(1.0, kappa), 0.0, c1


def make_generator(A, structure: str = "auto", name: str = "matrix", S=None,
                   eigenvalues=None, grid=None) -> MatrixGenerator:
    """Classify ``A`` and attach its constants.

    ``structure`` is ``auto``, ``selfadjoint_psd``, ``diagonalizable`` or
    ``general``. A caller-supplied ``S`` and ``eigenvalues`` with
    ``A = S diag(eigenvalues) S^{-1}`` are used for the certificate.
    """
    A = np.asarray(A)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError("generator must be a square matrix")
    if not np.all(np.isfinite(A)):
        raise ValueError("generator has non-finite entries")
    A = A.astype(complex if np.iscomplexobj(A) else float)
    n = A.shape[0]
    scale = max(_norm_one(A), 1.0)
    hermitian = np.allclose(A, A.conj().T, rtol=0, atol=1e-14 * scale)
    if structure == "auto":
        structure = "selfadjoint_psd" if hermitian else "diagonalizable"
    if structure == "selfadjoint_psd":
        if not hermitian:
            raise ValueError("selfadjoint_psd structure needs a Hermitian matrix")
        lam, V = np.linalg.eigh(0.5 * (A + A.conj().T))
        if lam.min(initial=0.0) < -1e-12 * scale:
            raise ValueError(f"{name}: negative eigenvalue {lam.min():.3g}")
        lam = np.maximum(lam, 0.0)
        M, c0, c1 = _certified_constants(structure, lam, V, V.conj().T)
        return MatrixGenerator(A, structure, name, lam, V, V.conj().T, M, c0, c1, True)
    if structure == "diagonalizable":
        if S is not None:
            S = np.asarray(S)
            lam = np.asarray(eigenvalues)
            S_inv = np.linalg.inv(S)
            if np.max(np.abs((S * lam) @ S_inv - A)) > 1e-9 * scale:
                raise ValueError(f"{name}: S diag(lambda) S^-1 does not reproduce A")
        else:
            lam, S = np.linalg.eig(A)
            S = S / np.linalg.norm(S, axis=0)
            if _kappa(S) > 1e8:
                structure = "general"
            else:
                S_inv = np.linalg.inv(S)
        if structure == "diagonalizable":
            if lam.real.min(initial=0.0) < -1e-10 * scale:
                raise ValueError(f"{name}: eigenvalue with negative real part")
            M, c0, c1 = _certified_constants(structure, lam, S, S_inv)
            if not math.isfinite(c1):
                structure = "general"
            else:
                return MatrixGenerator(A, structure, name, lam, S, S_inv, M, c0, c1, True)
    if structure != "general":
        raise ValueError(f"unknown structure {structure!r}")
    lam = np.linalg.eigvals(A)
    if lam.real.min(initial=0.0) < -1e-10 * scale:
        raise ValueError(f"{name}: eigenvalue with negative real part")
    G = MatrixGenerator(A, "general", name, lam, None, None, 1.0, 0.0, C1_FLOOR, False)
    M = estimate_M(G, grid)
    c0, c1 = estimate_yosida(G, grid)
    return MatrixGenerator(A, "general", name, lam, None, None, M, c0, c1, False)


# -- kernel estimates --------------------------------------------------------

def difference_kernel_check(G: MatrixGenerator, s: float, t: float) -> BoundCheckRecord:
    """``||(I - exp(-sA)) exp(-tA)||`` against both kernel bounds."""
    if not (s > 0 and t > 0):
        raise ValueError("s and t must be positive")
    M, c0, c1 = G.M, G.c0, G.c1
    K = G.one_minus_batch(np.array([s]))[0] @ semigroup_at(G, t)
    lhs = operator_norm(K)
    rhs_y = 2.0 * s * (2.0 * M * c0 / (1.0 + c0 * s) + max(2.0 * M, c1) / (t + s))
    r = t / (c0 * t + c1)
    rhs_r = 4.0 * M * s / (2.0 * M * r + s)
    a, b = 2.0 * M, s / r
    min_ok = min(a, b) <= 2.0 * a * b / (a + b) * (1 + 1e-12)
    return BoundCheckRecord("difference_kernel", lhs, min(rhs_y, rhs_r), generator=G.name, t=t,
                            s=s, extra={"rhs_yosida": rhs_y, "rhs_increasing_r": rhs_r,
                                        "min_identity_ok": min_ok},
                            M=M, c0=c0, c1=c1)


def converse_yosida_probe(G: MatrixGenerator, t: float, s: float = 1e-6) -> BoundCheckRecord:
    """``||(I - exp(-sA)) exp(-tA)|| / s`` against ``4 M c0 + 2 max(2M, c1) / t``."""
    K = G.one_minus_batch(np.array([s]))[0] @ semigroup_at(G, t)
    lhs = operator_norm(K) / s
    rhs = 4.0 * G.M * G.c0 + 2.0 * max(2.0 * G.M, G.c1) / t
    return BoundCheckRecord("converse_yosida", lhs, rhs, generator=G.name, t=t, s=s,
                            M=G.M, c0=G.c0, c1=G.c1)


# -- catalog -----------------------------------------------------------------

def dirichlet_laplacian(n: int = 16, h: float = 1.0) -> MatrixGenerator:
    """``tridiag(-1, 2, -1) / h**2``; eigenvalues ``(2 - 2 cos(k pi / (n+1))) / h**2``."""
    if n < 1 or h <= 0:
        raise ValueError("laplacian needs n >= 1 and h > 0")
    A = (2.0 * np.eye(n) - np.eye(n, k=1) - np.eye(n, k=-1)) / h**2
    return make_generator(A, "selfadjoint_psd", f"laplacian:n={n},h={h:g}")


def diag(values) -> MatrixGenerator:
    values = np.asarray(values, dtype=float)
    if np.any(values < 0):
        raise ValueError("diag generator needs nonnegative entries")
    name = "diag:" + ",".join(f"{v:g}" for v in values)
    return make_generator(np.diag(values), "selfadjoint_psd", name)


def similarity(S, eigenvalues, name: str = "similarity") -> MatrixGenerator:
    """``A = S diag(eigenvalues) S^{-1}``, non-normal for ill-conditioned ``S``."""
    S = np.asarray(S, dtype=float)
    lam = np.asarray(eigenvalues)
    A = (S * lam) @ np.linalg.inv(S)
    if not np.iscomplexobj(lam):
        A = A.real
    return make_generator(A, "diagonalizable", name, S=S, eigenvalues=lam)


def random_similarity(n: int = 8, kappa: float = 10.0, seed: int = 0,
                      eigenvalues=None) -> MatrixGenerator:
    """``S = U diag(sigma) V^T`` with ``cond(S) = kappa`` and a real positive spectrum."""
    rng = np.random.default_rng(seed)
    U, _ = np.linalg.qr(rng.standard_normal((n, n)))
    V, _ = np.linalg.qr(rng.standard_normal((n, n)))
    S = (U * np.geomspace(1.0, kappa, n)) @ V.T
    lam = np.linspace(1.0, float(n), n) if eigenvalues is None else np.asarray(eigenvalues)
    return similarity(S, lam, f"similarity:n={n},kappa={kappa:g},seed={seed}")


def rotation(a: float = 1.0, omega: float = 1.0, blocks: int = 1) -> MatrixGenerator:
    """Block diagonal ``[[a, omega], [-omega, a]]``; eigenvalues ``a +- i omega``."""
    if a <= 0:
        raise ValueError("rotation generator needs a > 0")
    blk = np.array([[a, omega], [-omega, a]])
    A = scipy.linalg.block_diag(*([blk] * blocks))
    # the block is normal; a unitary eigenbasis keeps the certificate sharp
    u = np.array([[1.0, 1.0], [1j, -1j]]) / math.sqrt(2.0)
    S = scipy.linalg.block_diag(*([u] * blocks))
    lam = np.tile(np.array([a + 1j * omega, a - 1j * omega]), blocks)
    G = make_generator(A, "diagonalizable", f"rotation:a={a:g},omega={omega:g},blocks={blocks}",
                       S=S, eigenvalues=lam)
    return G


def read_matrix(path) -> np.ndarray:
    """Plain-text matrix: header ``n m`` then ``n*m`` values in column-major order."""
    with open(path) as fh:
        tokens = fh.read().split()
    if len(tokens) < 2:
        raise ValueError(f"{path}: missing 'n m' header")
    n, m = int(tokens[0]), int(tokens[1])
    vals = tokens[2:]
    if len(vals) != n * m:
        raise ValueError(f"{path}: expected {n * m} values, found {len(vals)}")
    if any("j" in v for v in vals):
        data = np.array([complex(v) for v in vals])
    else:
        data = np.array([float(v) for v in vals])
    return data.reshape((n, m), order="F")


def format_matrix(M) -> str:
    M = np.atleast_2d(np.asarray(M))
    n, m = M.shape
    flat = M.ravel(order="F")
    if np.iscomplexobj(flat):
        body = [f"{complex(v)!r}".strip("()") for v in flat]
    else:
        body = [f"{float(v):.17g}" for v in flat]
    lines = [f"{n} {m}"]
    for i in range(0, len(body), max(n, 1)):
        lines.append(" ".join(body[i:i + n]))
    return "\n".join(lines) + "\n"


def write_matrix(path, M) -> None:
    with open(path, "w") as fh:
        fh.write(format_matrix(M))
