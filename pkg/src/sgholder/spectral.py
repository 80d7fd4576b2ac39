"""Spectral calculus over weighted finite state spaces.

A reversible continuous-time chain on N states is described by a strictly
positive weight vector mu (the trace is tau(f) = sum_i mu_i f_i) and a rate
matrix A with nonpositive off-diagonal entries, zero row sums and detailed
balance mu_i A_ij = mu_j A_ji.  The symmetrized matrix D^{1/2} A D^{-1/2}
(D = diag(mu)) is then symmetric positive semidefinite, so every function of
the generator is a dense spectral sum.  This module owns that calculus plus
the norm zoo used by the rest of the package: weighted L^p norms, the six
exactly-solvable operator (p, q) -> norms, and the quotient sup-norm modulo
the generator kernel.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import (
    ConvergenceError,
    DetailedBalanceError,
    DomainError,
    RowSumError,
    SignError,
    UnsupportedPair,
)

#: eigenvalues below KERNEL_RTOL * lambda_max count as kernel modes
KERNEL_RTOL = 1e-10


@dataclass(frozen=True)
class StateSpace:
    """Finite state space with a strictly positive measure."""

    mu: np.ndarray

    def __post_init__(self):
        mu = np.asarray(self.mu, dtype=float)
        if mu.ndim != 1 or mu.size < 1:
            raise ValueError("mu must be a nonempty vector")
        if not np.all(np.isfinite(mu)) or np.any(mu <= 0):
            raise ValueError("measure weights must be finite and > 0")
        object.__setattr__(self, "mu", mu)

    @property
    def size(self) -> int:
        return self.mu.size

    def trace(self, f) -> complex:
        return complex(np.dot(self.mu, np.asarray(f)))


@dataclass(frozen=True)
class FiniteChainGenerator:
    """Validated rate matrix of a reversible chain; build via validate_generator."""

    space: StateSpace
    matrix: np.ndarray


@dataclass(frozen=True)
class SpectralDecomposition:
    """Eigenpairs of a chain generator, orthonormal in L2(mu).

    eigenvalues are sorted ascending; eigenvectors are the columns of
    ``vectors``.  ``kernel_indices`` start the spectrum: eigenvalues below
    KERNEL_RTOL * lambda_max.
    """

    generator: FiniteChainGenerator
    eigenvalues: np.ndarray
    vectors: np.ndarray
    kernel_indices: np.ndarray = field(repr=False)

    @property
    def mu(self) -> np.ndarray:
        return self.generator.space.mu

    @property
    def kernel_dim(self) -> int:
        return self.kernel_indices.size

    @property
    def lambda_max(self) -> float:
        return float(self.eigenvalues[-1])

    @property
    def lambda_min_positive(self) -> float:
        """Smallest non-kernel eigenvalue (lambda_max for a kernel-only chain)."""
        if self.kernel_dim >= self.eigenvalues.size:
            return float(self.eigenvalues[-1])
        return float(self.eigenvalues[self.kernel_dim])

    def coefficients(self, f) -> np.ndarray:
        """L2(mu) coefficients <phi_k, f>_mu of f (vectorized over extra axes of f)."""
        f = np.asarray(f, dtype=complex)
        return self.vectors.T @ (self.mu[:, None] * f if f.ndim > 1 else self.mu * f)

    def synthesize(self, coeffs) -> np.ndarray:
        return self.vectors @ np.asarray(coeffs)


def validate_generator(space: StateSpace, A, *, rtol: float = 1e-12) -> FiniteChainGenerator:
    """Check the three reversibility invariants and return the wrapped generator.

    Raises SignError / RowSumError / DetailedBalanceError naming the first
    offending indices.  Positivity of the induced semigroup e^{-tA} follows
    from the sign pattern alone; two sample exponentials are still checked as
    a belt-and-braces guard against silent scaling bugs.
    """
    A = np.asarray(A, dtype=float)
    N = space.size
    if A.shape != (N, N) or not np.all(np.isfinite(A)):
        raise ValueError(f"generator must be a finite {N}x{N} matrix")
    scale = float(np.max(np.abs(A))) if A.size else 0.0

    off = A - np.diag(np.diag(A))
    bad = np.argwhere(off > rtol * max(scale, 1.0))
    if bad.size:
        raise SignError(tuple(bad[0]), f"positive off-diagonal rate at {tuple(bad[0])}")

    rows = np.abs(A.sum(axis=1))
    bad_rows = np.flatnonzero(rows > rtol * max(scale, 1.0) * max(N, 1))
    if bad_rows.size:
        raise RowSumError(tuple(bad_rows.tolist()))

    W = space.mu[:, None] * A
    asym = np.abs(W - W.T)
    wscale = max(float(np.max(np.abs(W))), 1e-300)
    bad = np.argwhere(asym > rtol * wscale * 10)
    bad = bad[bad[:, 0] < bad[:, 1]] if bad.size else bad
    if bad.size:
        raise DetailedBalanceError(tuple(bad[0]))

    gen = FiniteChainGenerator(space=space, matrix=A)
    if scale > 0:
        dec = eigendecompose(gen)
        for t in (0.1 / scale, 1.0 / scale):
            T = heat_matrix(dec, t)
            if np.min(T) < -1e-10 or np.max(np.abs(T.sum(axis=1) - 1.0)) > 1e-10:
                raise DetailedBalanceError(
                    (),
                    f"e^(-tA) at t={t:g} is not stochastic; generator rejected",
                )
    return gen


def eigendecompose(gen: FiniteChainGenerator) -> SpectralDecomposition:
    """Diagonalize D^{1/2} A D^{-1/2} and pull eigenvectors back to L2(mu)."""
    mu = gen.space.mu
    root = np.sqrt(mu)
    S = (root[:, None] * gen.matrix) / root[None, :]
    S = 0.5 * (S + S.T)
    lam, V = np.linalg.eigh(S)
    Phi = V / root[:, None]

    resid = float(np.max(np.abs(gen.matrix @ Phi - Phi * lam[None, :])))
    scale = max(float(np.max(np.abs(gen.matrix))), 1.0)
    if resid > 1e-9 * scale:
        raise ConvergenceError(f"eigen residual {resid:.3e} exceeds 1e-9*scale")
    gram = (Phi * mu[:, None]).T @ Phi
    if float(np.max(np.abs(gram - np.eye(mu.size)))) > 1e-10:
        raise ConvergenceError("eigenvectors not orthonormal in L2(mu)")

    lam = np.where(np.abs(lam) < KERNEL_RTOL * max(lam[-1], 0.0) + 1e-300, 0.0, lam)
    kernel = np.flatnonzero(lam <= KERNEL_RTOL * max(lam[-1], 0.0))
    return SpectralDecomposition(
        generator=gen, eigenvalues=lam, vectors=Phi, kernel_indices=kernel
    )


def spectral_apply(dec: SpectralDecomposition, g, f) -> np.ndarray:
    """Apply the spectral function g(A): sum_k g(lambda_k) <phi_k, f>_mu phi_k."""
    vals = np.asarray([g(l) for l in dec.eigenvalues], dtype=complex)
    if not np.all(np.isfinite(vals)):
        bad = dec.eigenvalues[~np.isfinite(vals)]
        raise DomainError(f"profile undefined at eigenvalues {bad}")
    return dec.synthesize(vals * dec.coefficients(f))


def spectral_apply_table(dec: SpectralDecomposition, table, f) -> np.ndarray:
    """Batched spectral application: table has shape (m, N) of g_j(lambda_k).

    Returns an (m, N) array of g_j(A) f; used to sweep whole s-grids in one
    matrix product.
    """
    table = np.asarray(table, dtype=complex)
    if not np.all(np.isfinite(table)):
        raise DomainError("profile table contains non-finite entries")
    c = dec.coefficients(f)
    return (table * c[None, :]) @ dec.vectors.T


def heat_matrix(dec: SpectralDecomposition, t: float) -> np.ndarray:
    """Dense matrix of e^{-tA} (rows act on functions)."""
    w = np.exp(-t * dec.eigenvalues)
    return (dec.vectors * w[None, :]) @ (dec.vectors.T * dec.mu[None, :])


def lp_norm(space: StateSpace, f, p: float) -> float:
    """Weighted L^p norm (sum_i mu_i |f_i|^p)^(1/p); max |f_i| at p = inf."""
    f = np.abs(np.asarray(f, dtype=complex))
    if p == np.inf:
        return float(np.max(f)) if f.size else 0.0
    if p < 1:
        raise ValueError("p must be >= 1")
    return float(np.dot(space.mu, f**p) ** (1.0 / p))


_PQ_PAIRS = {(1, np.inf), (1, 2), (2, np.inf), (2, 2), (1, 1), (np.inf, np.inf)}


def operator_pq_norm(space: StateSpace, K, pair) -> float:
    """Exact L^p(mu) -> L^q(mu) norm of the kernel operator (Tf)_i = sum_j K_ij f_j mu_j.

    Only the six endpoint pairs with closed forms are supported; anything else
    raises UnsupportedPair.
    """
    p, q = pair
    p = np.inf if p in ("inf", np.inf) else float(p)
    q = np.inf if q in ("inf", np.inf) else float(q)
    if (p, q) not in _PQ_PAIRS:
        raise UnsupportedPair(f"no closed form for (p, q) = ({p}, {q})")
    K = np.asarray(K)
    mu = space.mu
    aK = np.abs(K)
    if (p, q) == (1, np.inf):
        return float(np.max(aK))
    if (p, q) == (2, 2):
        root = np.sqrt(mu)
        M = root[:, None] * K * root[None, :]
        return float(np.linalg.norm(M, ord=2))
    if (p, q) == (1, 2):
        return float(np.sqrt(np.max(mu @ aK**2)))
    if (p, q) == (2, np.inf):
        return float(np.sqrt(np.max(aK**2 @ mu)))
    if (p, q) == (1, 1):
        return float(np.max(mu @ aK))
    return float(np.max(aK @ mu))  # (inf, inf)


def enclosing_disk_radius(points, tol: float = 1e-12) -> float:
    """Radius of the smallest disk enclosing a set of complex points (Welzl)."""
    pts = np.unique(np.asarray(points, dtype=complex))
    if pts.size == 0:
        return 0.0
    if pts.size == 1:
        return 0.0

    def disk2(a, b):
        return (a + b) / 2.0, abs(a - b) / 2.0

    def disk3(a, b, c):
        # circumcenter, degenerate triples fall back to the widest pair
        ax, ay, bx, by, cx, cy = a.real, a.imag, b.real, b.imag, c.real, c.imag
        d = 2.0 * (ax * (by - cy) + bx * (cy - ay) + cx * (ay - by))
        if abs(d) < 1e-14 * max(abs(a - b), abs(b - c), abs(a - c), 1.0) ** 2:
            pairs = [(a, b), (b, c), (a, c)]
            ctr, r = max((disk2(u, v) for u, v in pairs), key=lambda cr: cr[1])
            return ctr, r
        ux = ((ax**2 + ay**2) * (by - cy) + (bx**2 + by**2) * (cy - ay) + (cx**2 + cy**2) * (ay - by)) / d
        uy = ((ax**2 + ay**2) * (cx - bx) + (bx**2 + by**2) * (ax - cx) + (cx**2 + cy**2) * (bx - ax)) / d
        ctr = complex(ux, uy)
        return ctr, abs(a - ctr)

    center, radius = disk2(pts[0], pts[1])
    for i in range(2, pts.size):
        if abs(pts[i] - center) <= radius * (1 + tol):
            continue
        center, radius = disk2(pts[i], pts[0])
        for j in range(1, i):
            if abs(pts[j] - center) <= radius * (1 + tol):
                continue
            center, radius = disk2(pts[i], pts[j])
            for k in range(j):
                if abs(pts[k] - center) > radius * (1 + tol):
                    center, radius = disk3(pts[i], pts[j], pts[k])
    return float(radius)


def chebyshev_center_norm(basis: np.ndarray, f: np.ndarray, tol: float = 1e-8,
                          max_iter: int = 500) -> float:
    """min over span(basis columns) of ||f - c||_inf by Lawson iteration.

    Lawson's iteratively reweighted least squares converges to the minimax
    (Chebyshev) solution of this convex problem; used for kernels of
    dimension > 1 where no closed form exists.
    """
    f = np.asarray(f, dtype=complex)
    B = np.asarray(basis, dtype=complex)
    n = f.size
    w = np.full(n, 1.0 / n)
    best = np.inf
    for _ in range(max_iter):
        sw = np.sqrt(w)
        coef, *_ = np.linalg.lstsq(sw[:, None] * B, sw * f, rcond=None)
        r = np.abs(f - B @ coef)
        val = float(np.max(r))
        lower = float(np.dot(w, r))  # Lawson lower bound on the minimax value
        best = min(best, val)
        if val - lower <= tol * max(val, 1.0):
            return val
        w = w * r
        s = w.sum()
        if s <= 0:
            return val
        w = w / s
    raise ConvergenceError(f"Chebyshev center not within {tol:g} after {max_iter} sweeps")


def quotient_sup_norm(dec: SpectralDecomposition, f) -> float:
    """inf over kernel elements c of ||f - c||_inf.

    For the generic irreducible chain the kernel is the constant span and the
    infimum has a closed form: half the value spread for real f, the smallest
    enclosing disk radius for complex f.  Higher-dimensional kernels go
    through the Lawson minimax iteration.
    """
    f = np.asarray(f, dtype=complex)
    k = dec.kernel_dim
    if k == 0:
        return float(np.max(np.abs(f))) if f.size else 0.0
    if k == 1:
        # the kernel vector of an irreducible chain is constant; tolerate the
        # general 1-dim case by checking
        v = dec.vectors[:, dec.kernel_indices[0]]
        if np.max(np.abs(v - v[0])) <= 1e-12 * max(np.max(np.abs(v)), 1e-300):
            if np.max(np.abs(f.imag)) <= 1e-14 * max(np.max(np.abs(f)), 1e-300):
                re = f.real
                return float((re.max() - re.min()) / 2.0)
            return enclosing_disk_radius(f)
    basis = dec.vectors[:, dec.kernel_indices]
    return chebyshev_center_norm(basis, f)
