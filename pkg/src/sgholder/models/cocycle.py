"""Negative-type functions on finite groups and their Hilbert-space cocycles.

A symmetric psi: G -> R_+ with psi(e) = 0 generates a Markovian semigroup of
multipliers exactly when the kernel K(g, h) = (psi(g) + psi(h) - psi(g^{-1}h))/2
is positive semidefinite; equivalently, when psi(g) = ||beta(g)||^2 for a
1-cocycle beta relative to an orthogonal representation pi, i.e.
beta(gh) = beta(g) + pi(g) beta(h).  This module checks the kernel condition
(returning an explicit zero-sum violating vector on failure) and factors a
passing psi into (beta, pi) data.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from ..errors import CocycleConsistencyError, SymmetryError


@dataclass(frozen=True)
class FiniteGroup:
    """Multiplication table group: table[i, j] = index of g_i * g_j."""

    table: np.ndarray
    name: str = "group"

    def __post_init__(self):
        t = np.asarray(self.table, dtype=int)
        m = t.shape[0]
        if t.shape != (m, m) or np.any(t < 0) or np.any(t >= m):
            raise ValueError("not a multiplication table")
        ident = [i for i in range(m) if np.all(t[i] == np.arange(m)) and np.all(t[:, i] == np.arange(m))]
        if len(ident) != 1 or ident[0] != 0:
            raise ValueError("identity must be element 0")
        inv = np.full(m, -1, dtype=int)
        for i in range(m):
            js = np.flatnonzero(t[i] == 0)
            if js.size != 1:
                raise ValueError(f"element {i} has no unique inverse")
            inv[i] = js[0]
        # associativity, cheap at desk scale
        for a in range(m):
            if np.any(t[t[a], :] != t[a, t]):
                raise ValueError("multiplication table is not associative")
        object.__setattr__(self, "table", t)
        object.__setattr__(self, "_inverse", inv)

    @property
    def order(self) -> int:
        return self.table.shape[0]

    @property
    def inverse(self) -> np.ndarray:
        return self._inverse

    def mul(self, i: int, j: int) -> int:
        return int(self.table[i, j])


def cyclic_group(m: int) -> FiniteGroup:
    idx = np.arange(m)
    return FiniteGroup((idx[:, None] + idx[None, :]) % m, name=f"Z{m}")


def direct_product(a: FiniteGroup, b: FiniteGroup) -> FiniteGroup:
    ma, mb = a.order, b.order
    t = np.zeros((ma * mb, ma * mb), dtype=int)
    for i1 in range(ma):
        for j1 in range(mb):
            for i2 in range(ma):
                for j2 in range(mb):
                    t[i1 * mb + j1, i2 * mb + j2] = a.table[i1, i2] * mb + b.table[j1, j2]
    return FiniteGroup(t, name=f"{a.name}x{b.name}")


def boolean_cube_group(n: int) -> FiniteGroup:
    """(Z_2)^n with elements indexed by bitmasks (xor composition)."""
    idx = np.arange(1 << n)
    return FiniteGroup(idx[:, None] ^ idx[None, :], name=f"Z2^{n}")


def dihedral_group(n: int) -> FiniteGroup:
    """Dihedral group of order 2n: elements (r, f) -> index f*n + r."""
    m = 2 * n
    t = np.zeros((m, m), dtype=int)
    for f1 in (0, 1):
        for r1 in range(n):
            for f2 in (0, 1):
                for r2 in range(n):
                    # (r1, f1)(r2, f2) = (r1 + (-1)^{f1} r2 mod n, f1 xor f2)
                    r = (r1 + (r2 if f1 == 0 else -r2)) % n
                    t[f1 * n + r1, f2 * n + r2] = (f1 ^ f2) * n + r
    return FiniteGroup(t, name=f"D{n}")


def hamming_psi(n: int) -> np.ndarray:
    """Hamming weight on (Z_2)^n, the canonical negative-type function there."""
    return np.array([bin(g).count("1") for g in range(1 << n)], dtype=float)


def random_cn_psi(group: FiniteGroup, rng: np.random.Generator) -> np.ndarray:
    """Random negative-type psi: psi(g) = phi(e) - Re phi(g) with phi = <lambda_g xi, xi>."""
    m = group.order
    xi = rng.standard_normal(m) + 1j * rng.standard_normal(m)
    phi = np.zeros(m, dtype=complex)
    inv = group.inverse
    for g in range(m):
        idx = group.table[inv[g]]  # h -> g^{-1} h
        phi[g] = np.vdot(xi, xi[idx])
    psi = phi[0].real - phi.real
    psi[0] = 0.0
    return np.maximum(psi, 0.0)


@dataclass(frozen=True)
class CnCheckResult:
    """Outcome of the negative-type kernel test."""

    is_conditionally_negative: bool
    min_eigenvalue: float
    kernel: np.ndarray
    psi: np.ndarray
    group: FiniteGroup | None
    witness: np.ndarray | None  # zero-sum vector violating the sign condition

    def __bool__(self) -> bool:
        return self.is_conditionally_negative


def _kernel_matrix_group(group: FiniteGroup, psi: np.ndarray) -> np.ndarray:
    inv = group.inverse
    diff = group.table[inv]  # diff[g, h] = g^{-1} h
    return 0.5 * (psi[:, None] + psi[None, :] - psi[diff])


def conditionally_negative_check(target, psi, tol: float = 1e-10) -> CnCheckResult:
    """PSD test of the negative-type kernel, with a violating witness on failure.

    ``target`` is either a FiniteGroup (psi = length-m array) or an integer
    truncation radius F (psi = callable on the integers, tested on [-F, F]).
    Raises SymmetryError when psi(g) != psi(g^{-1}).
    """
    if isinstance(target, FiniteGroup):
        psi_vec = np.asarray(psi, dtype=float)
        if psi_vec.shape != (target.order,):
            raise ValueError("psi must assign one value per group element")
        if abs(psi_vec[0]) > tol:
            raise ValueError("psi must vanish at the identity")
        asym = np.abs(psi_vec - psi_vec[target.inverse])
        if np.max(asym) > tol * max(np.max(np.abs(psi_vec)), 1.0):
            g = int(np.argmax(asym))
            raise SymmetryError(f"psi({g}) != psi(inverse({g}))")
        K = _kernel_matrix_group(target, psi_vec)
        group = target
    else:
        F = int(target)
        vals = np.asarray(psi(np.arange(-2 * F, 2 * F + 1).astype(float)), dtype=float)
        if abs(vals[2 * F]) > tol:
            raise ValueError("psi must vanish at 0")
        if np.max(np.abs(vals - vals[::-1])) > tol * max(np.max(np.abs(vals)), 1.0):
            raise SymmetryError("psi(k) != psi(-k) on the truncation")
        ks = np.arange(-F, F + 1)
        psi_vec = vals[ks + 2 * F]
        K = 0.5 * (psi_vec[:, None] + psi_vec[None, :] - vals[(ks[None, :] - ks[:, None]) + 2 * F])
        group = None

    K = 0.5 * (K + K.T)
    lam, V = np.linalg.eigh(K)
    floor = -tol * max(np.trace(K), 1e-30)
    ok = bool(lam[0] >= floor)
    witness = None
    if not ok:
        v = V[:, 0].astype(complex)
        witness = v.copy()
        if group is not None:
            witness[0] -= v.sum()  # K(e, .) = 0, so the form value is unchanged
        else:
            # append the identity correction at k = 0 (middle slot)
            witness[witness.size // 2] -= v.sum()
    return CnCheckResult(
        is_conditionally_negative=ok,
        min_eigenvalue=float(lam[0]),
        kernel=K,
        psi=psi_vec,
        group=group,
        witness=witness,
    )


def zero_sum_form(group: FiniteGroup, psi: np.ndarray, v: np.ndarray) -> float:
    """Re sum_{i,j} conj(v_i) psi(g_i^{-1} g_j) v_j, the sign-condition quadratic form."""
    diff = group.table[group.inverse]
    M = np.asarray(psi, dtype=float)[diff]
    return float(np.real(np.conj(v) @ M @ v))


@dataclass(frozen=True)
class CocycleData:
    """Explicit cocycle factorization psi(g) = ||beta(g)||^2."""

    group: FiniteGroup
    psi: np.ndarray
    beta: np.ndarray  # (d, m): column g is beta(g)
    pi: np.ndarray    # (m, d, d): orthogonal matrices

    @property
    def dim(self) -> int:
        return self.beta.shape[0]


def cocycle_from_psi(check: CnCheckResult, clip_tol: float = 1e-10) -> CocycleData:
    """Factor a passing kernel as B^T B and build the orthogonal cocycle maps.

    The representation pi(g) is pinned on span{beta(h)} by
    pi(g) beta(h) = beta(gh) - beta(g) and extended by the identity on the
    orthogonal complement; CocycleConsistencyError is raised if the pinned map
    fails to be an isometry within 1e-8 (it is exactly one in infinite
    precision whenever the kernel is PSD).
    """
    if check.group is None:
        raise ValueError("cocycle factorization needs a finite group check result")
    if not check.is_conditionally_negative:
        raise ValueError("psi failed the negative-type check; no cocycle exists")
    group, K = check.group, check.kernel
    m = group.order
    lam, V = np.linalg.eigh(K)
    floor = -clip_tol * max(np.trace(K), 1e-30)
    if lam[0] < floor:
        raise ValueError("kernel is not PSD within the clipping tolerance")
    lam = np.clip(lam, 0.0, None)
    keep = lam > clip_tol * max(np.trace(K), 1e-30)
    if not np.any(keep):
        beta = np.zeros((1, m))
        pi = np.tile(np.eye(1), (m, 1, 1))
        return CocycleData(group=group, psi=check.psi, beta=beta, pi=pi)

    B = (np.sqrt(lam[keep])[:, None]) * V[:, keep].T  # (d, m), K = B^T B
    d = B.shape[0]

    U, S, Vt = np.linalg.svd(B, full_matrices=False)
    r = int(np.sum(S > 1e-12 * S[0]))
    Qu = U[:, :r]
    pis = np.zeros((m, d, d))
    for g in range(m):
        W = B[:, group.table[g]] - B[:, [g] * m]  # columns beta(gh) - beta(g)
        Qw = W @ (Vt[:r].T / S[:r])
        gram_err = float(np.max(np.abs(Qw.T @ Qw - np.eye(r))))
        if gram_err > 1e-8:
            raise CocycleConsistencyError(
                f"pinned map at g={g} distorts the metric by {gram_err:.2e}"
            )
        pis[g] = Qw @ Qu.T + (np.eye(d) - Qu @ Qu.T)

    data = CocycleData(group=group, psi=check.psi, beta=B, pi=pis)
    _verify_cocycle(data)
    return data


def _verify_cocycle(data: CocycleData):
    g, B, pis = data.group, data.beta, data.pi
    m = g.order
    scale = max(float(np.max(data.psi)), 1.0)
    err_norm = float(np.max(np.abs(np.sum(B**2, axis=0) - data.psi)))
    if err_norm > 1e-10 * scale:
        raise CocycleConsistencyError(f"||beta(g)||^2 misses psi by {err_norm:.2e}")
    for i in range(m):
        orth = float(np.max(np.abs(pis[i].T @ pis[i] - np.eye(data.dim))))
        if orth > 1e-10:
            raise CocycleConsistencyError(f"pi({i}) not orthogonal: {orth:.2e}")
        err = float(np.max(np.abs(B[:, g.table[i]] - (B[:, [i] * m] + pis[i] @ B))))
        if err > 1e-9 * max(scale**0.5, 1.0):
            raise CocycleConsistencyError(f"cocycle identity fails at g={i}: {err:.2e}")


def read_group_table(source) -> FiniteGroup:
    """Load a multiplication table from a JSON array-of-arrays (path or file object)."""
    if hasattr(source, "read"):
        data = json.load(source)
    else:
        with open(source, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    return FiniteGroup(np.asarray(data, dtype=int))
