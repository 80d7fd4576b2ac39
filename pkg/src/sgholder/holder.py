"""Seminorms of smoothness type: sup over s of s^{k-alpha} ||d^k P_s f / ds^k||.

The objective is smooth and log-unimodal per spectral band, so the search is
a dense log grid (bracketing every Poisson mode by three decades) followed by
golden-section refinement in log s around the grid argmax.  Variants: plain
sup-norm or kernel-quotient norm, derivative order k >= 1, Hilbert-valued
fields with componentwise flow, and the translation (Weaver) norm on the
deformed torus.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import IntertwiningUnverified
from .gamma import GradientField
from .models.fourier import grid_values, grid_values_batch
from .models.qtorus import QuantumTorusElement, qt_norm_batch, qt_operator_norm
from .semigroup import SemigroupModel
from .spectral import enclosing_disk_radius, quotient_sup_norm

_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0

KERNEL_FLAG = "kernel_element"
RANGE_FLAG = "range_warning"


@dataclass(frozen=True)
class SeminormResult:
    value: float
    argmax_s: float
    alpha: float
    order: int
    quotient: bool
    grid: np.ndarray = field(repr=False)
    refinement_iterations: int = 0
    flags: tuple = ()

    def __float__(self) -> float:
        return self.value


def golden_refine(objective, lo: float, hi: float, rel_tol: float = 1e-4,
                  max_iter: int = 80):
    """Golden-section maximization in log s on [lo, hi].

    Stops when the bracket's objective spread falls below rel_tol relative to
    the incumbent; returns (value, argmax, iterations).
    """
    a, b = math.log(lo), math.log(hi)
    c = b - _INV_PHI * (b - a)
    d = a + _INV_PHI * (b - a)
    fc, fd = objective(math.exp(c)), objective(math.exp(d))
    best, s_best = max((fc, math.exp(c)), (fd, math.exp(d)))
    it = 0
    for it in range(1, max_iter + 1):
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - _INV_PHI * (b - a)
            fc = objective(math.exp(c))
        else:
            a, c, fc = c, d, fd
            d = a + _INV_PHI * (b - a)
            fd = objective(math.exp(d))
        cand, s_cand = max((fc, math.exp(c)), (fd, math.exp(d)))
        if cand > best:
            best, s_best = cand, s_cand
        if abs(fc - fd) <= rel_tol * max(best, 1e-300) and (b - a) < 0.5:
            break
    return best, s_best, it


def sup_search(objective, s_grid, batch=None, refine: bool = True,
               rel_tol: float = 1e-4):
    """Grid sup with optional golden refinement; flags boundary attainment."""
    s_grid = np.asarray(s_grid, dtype=float)
    vals = np.asarray(batch(s_grid)) if batch is not None else np.asarray(
        [objective(s) for s in s_grid]
    )
    i = int(np.argmax(vals))
    value, s_star = float(vals[i]), float(s_grid[i])
    flags = ()
    iters = 0
    if i == 0 or i == s_grid.size - 1:
        flags = (RANGE_FLAG,)
    elif refine and value > 0:
        ref_val, ref_s, iters = golden_refine(
            objective, s_grid[i - 1], s_grid[i + 1], rel_tol=rel_tol
        )
        if ref_val > value:
            value, s_star = ref_val, ref_s
    return value, s_star, vals, flags, iters


# -- derivative rows and their norms ------------------------------------------------


def poisson_derivative_rows(model: SemigroupModel, s_grid, f, k: int):
    """Batched d^k P_s f over the grid: chain -> state values, fourier -> coefficients."""
    pts = model.spectral_points(f)
    root = np.sqrt(np.clip(pts, 0.0, None))
    table = (-root[None, :]) ** k * np.exp(-np.outer(np.asarray(s_grid), root))
    return model.profile_table(table, f)


def row_sup_norms(model: SemigroupModel, rows, sample) -> np.ndarray:
    if model.kind == "chain":
        return np.max(np.abs(rows), axis=1)
    fm = model.fourier
    B = sample.radius
    R = max(fm.R, 4 * (2 * B + 1))
    if fm.n == 1:
        vals = grid_values_batch(rows, B, R)
        return np.max(np.abs(vals), axis=1)
    side = 2 * B + 1
    out = np.empty(rows.shape[0])
    for i in range(rows.shape[0]):
        out[i] = np.max(np.abs(grid_values(rows[i].reshape((side,) * fm.n), B, R)))
    return out


def row_quotient_norms(model: SemigroupModel, rows, sample) -> np.ndarray:
    if model.kind == "chain":
        dec = model.chain
        return np.asarray([quotient_sup_norm(dec, r) for r in rows])
    fm = model.fourier
    B = sample.radius
    R = max(fm.R, 4 * (2 * B + 1))
    out = np.empty(rows.shape[0])
    for i in range(rows.shape[0]):
        if fm.n == 1:
            vals = grid_values_batch(rows[i : i + 1], B, R)[0]
        else:
            side = 2 * B + 1
            vals = grid_values(rows[i].reshape((side,) * fm.n), B, R).ravel()
        if np.max(np.abs(vals.imag)) <= 1e-13 * max(np.max(np.abs(vals)), 1e-300):
            out[i] = (vals.real.max() - vals.real.min()) / 2.0
        else:
            out[i] = enclosing_disk_radius(vals)
    return out


def _is_kernel_element(model: SemigroupModel, f, tol: float = 1e-13) -> bool:
    proj = model.project_out_kernel(f)
    if model.kind == "chain":
        return float(np.max(np.abs(proj))) <= tol * max(float(np.max(np.abs(np.asarray(f)))), 1e-300)
    if model.kind == "fourier":
        scale = max(float(np.max(np.abs(f.coeffs))), 1e-300)
        return float(np.max(np.abs(proj.coeffs))) <= tol * scale
    scale = max((abs(v) for v in f.coeffs.values()), default=0.0)
    return all(abs(v) <= tol * max(scale, 1e-300) for v in proj.coeffs.values())


def holder_seminorm(model: SemigroupModel, f, alpha: float, k: int = 1,
                    use_quotient: bool = False, s_grid=None, refine: bool = True,
                    points_per_decade: int = 32) -> SeminormResult:
    """sup over s of s^{k - alpha} || d^k P_s f / ds^k || (plain or quotient norm)."""
    if not 0 < alpha < k:
        raise ValueError(f"need 0 < alpha < k, got alpha={alpha}, k={k}")
    if model.kind == "qtorus":
        return qt_holder_seminorm(f, alpha, k=k,
                                  L=model.qt["L"], tol=model.qt["tol"],
                                  s_grid=s_grid, refine=refine)
    if _is_kernel_element(model, f):
        grid = np.asarray([1.0]) if s_grid is None else np.asarray(s_grid)
        return SeminormResult(0.0, float(grid[0]), alpha, k, use_quotient, grid,
                              0, (KERNEL_FLAG,))
    grid = model.default_s_grid(points_per_decade) if s_grid is None else np.asarray(s_grid)
    norms = row_quotient_norms if use_quotient else row_sup_norms

    def batch(ss):
        rows = poisson_derivative_rows(model, ss, f, k)
        return ss ** (k - alpha) * norms(model, rows, f)

    def single(s):
        return float(batch(np.asarray([s]))[0])

    value, s_star, vals, flags, iters = sup_search(single, grid, batch=batch, refine=refine)
    return SeminormResult(value, s_star, alpha, k, use_quotient, grid, iters, flags)


def holder_norm(model: SemigroupModel, f, alpha: float, **kw) -> float:
    """max of the plain sup-norm and the smoothness seminorm."""
    return max(model.sup_norm(f), holder_seminorm(model, f, alpha, **kw).value)


def eigen_seminorm_closed_form(lam: float, alpha: float, k: int = 1, norm: float = 1.0) -> float:
    """Seminorm of an eigenfunction: lambda^{alpha/2} (k-alpha)^{k-alpha} e^{-(k-alpha)} ||f||.

    Maximizing s^{k-alpha} lambda^{k/2} e^{-s sqrt(lambda)} at s* = (k-alpha)/sqrt(lambda).
    """
    return float(lam ** (alpha / 2.0) * (k - alpha) ** (k - alpha) * np.exp(-(k - alpha)) * norm)


def hilbert_holder_seminorm(model: SemigroupModel, fld: GradientField, alpha: float,
                            s_grid=None, refine: bool = True,
                            points_per_decade: int = 32) -> SeminormResult:
    """Fiber-valued seminorm: sup_s s^{1-alpha} || |d(P_s x id) F|_H ||_inf.

    Requires the gradient to commute with the flow (componentwise diagonal
    action); models without the verified intertwining are rejected.
    """
    if not fld.intertwines:
        raise IntertwiningUnverified("gradient does not commute with the flow here")
    if not 0 < alpha < 1:
        raise ValueError("need 0 < alpha < 1")
    comps = fld.components
    sample = comps[0]
    grid = model.default_s_grid(points_per_decade) if s_grid is None else np.asarray(s_grid)

    def batch(ss):
        acc = None
        for c in comps:
            rows = poisson_derivative_rows(model, ss, c, 1)
            fm = model.fourier
            B = c.radius
            R = max(fm.R, 4 * (2 * B + 1))
            if fm.n == 1:
                vals = grid_values_batch(rows, B, R)
            else:
                side = 2 * B + 1
                vals = np.stack([
                    grid_values(rows[i].reshape((side,) * fm.n), B, R).ravel()
                    for i in range(rows.shape[0])
                ])
            term = np.abs(vals) ** 2
            acc = term if acc is None else acc + term
        return np.asarray(ss) ** (1 - alpha) * np.sqrt(np.max(acc, axis=1))

    def single(s):
        return float(batch(np.asarray([s]))[0])

    if all(_is_kernel_element(model, c) for c in comps):
        return SeminormResult(0.0, float(grid[0]), alpha, 1, False, grid, 0, (KERNEL_FLAG,))
    value, s_star, vals, flags, iters = sup_search(single, grid, batch=batch, refine=refine)
    return SeminormResult(value, s_star, alpha, 1, False, grid, iters, flags)


def eqsquare_ratio(model: SemigroupModel, samples, alpha: float):
    """Per-sample ratio of the order-2 to the order-1 seminorm; reports extremes."""
    ratios = []
    for f in samples:
        one = holder_seminorm(model, f, alpha, k=1)
        two = holder_seminorm(model, f, alpha, k=2)
        if one.value <= 0:
            continue
        ratios.append(two.value / one.value)
    if not ratios:
        return (np.nan, np.nan, [])
    return (float(np.min(ratios)), float(np.max(ratios)), ratios)


# -- deformed torus -------------------------------------------------------------------


def qt_poisson_derivative(f: QuantumTorusElement, s: float, k: int = 1) -> QuantumTorusElement:
    c = {}
    for key, v in f.coeffs.items():
        r = 2.0 * np.pi * math.sqrt(sum(x * x for x in key))
        c[key] = (-r) ** k * math.exp(-s * r) * v
    return QuantumTorusElement(f.n, f.theta, c)


def qt_holder_seminorm(f: QuantumTorusElement, alpha: float, k: int = 1, L: int = 24,
                       tol: float = 1e-6, s_grid=None, refine: bool = True,
                       points_per_decade: int = 16) -> SeminormResult:
    """Smoothness seminorm with the represented operator norm as the norm oracle."""
    from .models.qtorus import qt_family_norms

    if not 0 < alpha < k:
        raise ValueError("need 0 < alpha < k")
    support = sorted(key for key in f.coeffs if any(key))
    if not support:
        grid = np.asarray([1.0]) if s_grid is None else np.asarray(s_grid)
        return SeminormResult(0.0, float(grid[0]), alpha, k, False, grid, 0, (KERNEL_FLAG,))
    a = np.asarray([f.coeffs[key] for key in support])
    rates = np.asarray([2.0 * np.pi * math.sqrt(sum(x * x for x in key)) for key in support])
    if s_grid is None:
        lo = 1e-3 / rates.max()
        hi = 1e3 / rates.min()
        n = max(int(np.ceil(np.log10(hi / lo) * points_per_decade)) + 1, 2)
        grid = np.geomspace(lo, hi, n)
    else:
        grid = np.asarray(s_grid)

    def coeff_columns(ss):
        return ((-rates[:, None]) ** k) * np.exp(-np.outer(rates, ss)) * a[:, None]

    def batch(ss):
        ss = np.asarray(ss)
        vals, _, _ = qt_family_norms(f.n, f.theta, support, coeff_columns(ss), L, tol)
        return ss ** (k - alpha) * vals

    def single(s):
        return float(batch(np.asarray([s]))[0])

    value, s_star, vals, flags, iters = sup_search(single, grid, batch=batch, refine=refine)
    return SeminormResult(value, s_star, alpha, k, False, grid, iters, flags)


@dataclass(frozen=True)
class WeaverResult:
    value: float
    seminorm: float
    sup_norm: float
    argmax_z: tuple
    flags: tuple = ()


def translate(f: QuantumTorusElement, z) -> QuantumTorusElement:
    """sigma_z f: coefficients modulated by e^{2 pi i <z, k>}."""
    z = np.asarray(z, dtype=float)
    return QuantumTorusElement(
        f.n, f.theta,
        {k: v * np.exp(2j * np.pi * float(np.dot(z, k))) for k, v in f.coeffs.items()},
    )


def torus_geodesic_norm(z) -> float:
    z = np.mod(np.asarray(z, dtype=float), 1.0)
    return float(np.sqrt(np.sum(np.minimum(z, 1.0 - z) ** 2)))


def weaver_norm(f: QuantumTorusElement, alpha: float, L: int = 24, z_per_axis: int = 64,
                tol: float = 1e-6, axis_only: bool = False) -> WeaverResult:
    """max(||f||, sup_z ||sigma_z f - f|| / |z|^alpha) over a translation grid.

    |z| is the geodesic distance on the torus.  axis_only sweeps only the
    coordinate directions (the cheaper one-parameter variant).  The grid runs
    in raster rows with warm-started block power iterations: neighbouring
    translation differences share their top singular vector almost exactly.
    """
    from .models.qtorus import qt_family_norms

    sup = qt_operator_norm(f, L, tol)
    if not f.coeffs:
        return WeaverResult(0.0, 0.0, 0.0, (0.0,) * f.n)
    support = sorted(f.coeffs)
    a = np.asarray([f.coeffs[key] for key in support])
    kmat = np.asarray(support, dtype=float)  # (K, n)

    # the objective is symmetric under z -> -z (sigma_z is an isometric
    # automorphism), so only half the first axis is swept
    if axis_only:
        ts = np.linspace(0.0, 0.5, z_per_axis // 2 + 1)[1:]
        rows = [[tuple(t if j == i else 0.0 for j in range(f.n)) for t in ts]
                for i in range(f.n)]
    else:
        axis = np.arange(1, z_per_axis + 1) / z_per_axis
        half = axis[axis <= 0.5 + 1e-12]
        if f.n == 1:
            rows = [[(float(t),) for t in half if torus_geodesic_norm((t,)) > 0]]
        else:
            tail = np.meshgrid(*([axis] * (f.n - 1)), indexing="ij")
            tail_pts = [tuple(float(m[idx]) for m in tail) for idx in np.ndindex(*tail[0].shape)]
            rows = []
            for t0 in half:
                row = [(float(t0),) + p for p in tail_pts]
                rows.append([z for z in row if torus_geodesic_norm(z) > 0])

    # shallow warm-started sweep to locate candidates, then deep evaluation of
    # the leaders (the sweep estimates are tight lower bounds, so the true
    # argmax is always among the near-ties)
    all_z: list = []
    all_ratios: list = []
    warm = None
    for row in rows:
        if not row:
            continue
        zmat = np.asarray(row)  # (Z, n)
        mod = np.exp(2j * np.pi * (kmat @ zmat.T)) - 1.0  # (K, Z)
        C = a[:, None] * mod
        norms, _, warm = qt_family_norms(f.n, f.theta, support, C, L, tol, v0=warm,
                                         two_box=False, depth=(4, 8, 0, False))
        dists = np.asarray([torus_geodesic_norm(z) for z in row])
        all_z.extend(row)
        all_ratios.extend(norms / dists**alpha)
    order = np.argsort(all_ratios)[::-1][:12]
    best = (-np.inf, all_z[int(order[0])])
    for i in order:
        z = all_z[int(i)]
        val = qt_operator_norm(translate(f, z) - f, L, tol) / torus_geodesic_norm(z) ** alpha
        if val > best[0]:
            best = (float(val), z)
    semi = best[0]
    return WeaverResult(max(sup, semi), semi, sup, best[1])
