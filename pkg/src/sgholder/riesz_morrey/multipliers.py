"""Spectral and frequency multiplier experiments on the smoothness classes.

Analytic profiles act through the Laplace-type representation

    m(x) = integral_0^inf x e^{-t x} M(t) dt,   x = sqrt(lambda),

with the bounded density M as the controlling norm (M = 1 gives the identity
off the kernel; M(t) = t^{-i a}/GammaFn(1 - i a) gives the imaginary power
x^{i a}).  The frequency-side theorem on the integer model bounds a
multiplier m: Z -> C through the supremum over t of Sobolev norms of
m(k) eta(t sqrt(psi(k))), eta(z) = z e^{-z/2}, measured against the discrete
Laplacian's dual-circle symbol 3 - 2 cos(2 pi theta).
"""

from __future__ import annotations

import numpy as np
from scipy.integrate import quad
from scipy.special import gamma as gamma_fn

from ..errors import QuadratureError
from ..holder import holder_seminorm
from ..semigroup import SemigroupModel
from .sweeps import RatioSweep, ratio_sweep


def laplace_profile_value(M, x: float, tol: float = 1e-10) -> complex:
    """m(x) = integral_0^inf x e^{-tx} M(t) dt by adaptive quadrature (m(0) = 0)."""
    if x <= 0:
        return 0.0
    re, re_err = quad(lambda u: np.exp(-u) * np.real(M(u / x)), 0.0, np.inf,
                      limit=400, epsabs=tol, epsrel=tol)
    im, im_err = quad(lambda u: np.exp(-u) * np.imag(M(u / x)), 0.0, np.inf,
                      limit=400, epsabs=tol, epsrel=tol)
    if max(re_err, im_err) > 100 * tol * max(1.0, abs(re) + abs(im)):
        raise QuadratureError(f"profile integral error {max(re_err, im_err):.2e} at x={x:g}")
    return complex(re, im)


def analytic_multiplier_apply(model: SemigroupModel, M, f, tol: float = 1e-10):
    """Apply m(A^{1/2}) with m from the Laplace representation of M.

    The profile is evaluated once per distinct spectral point (cached), then
    applied diagonally; the zero mode receives m(0) = 0.
    """
    pts = np.unique(np.clip(model.spectral_points(f), 0.0, None))
    table = {float(lam): laplace_profile_value(M, float(np.sqrt(lam)), tol) for lam in pts}

    def g(lam):
        arr = np.clip(np.asarray(lam, dtype=float), 0.0, None)
        flat = arr.ravel()
        res = np.empty(flat.shape, dtype=complex)
        for i, v in enumerate(flat):
            key = float(v)
            if key not in table:
                table[key] = laplace_profile_value(M, float(np.sqrt(key)), tol)
            res[i] = table[key]
        return res.reshape(arr.shape) if arr.shape else res[0]

    return model.apply_profile(g, f)


def imaginary_power_profile(a: float):
    """Density M(t) = t^{-i a} / GammaFn(1 - i a); m(x) = x^{i a}, ||M||_inf = 1/|GammaFn(1-ia)|."""
    gval = gamma_fn(complex(1.0, -a))

    def M(t):
        return np.exp(-1j * a * np.log(t)) / gval if t > 0 else 0.0 / gval

    return M, float(1.0 / abs(gval))


def truncation_profile(T: float):
    """M = 1_{t <= T}; closed form m(lambda') = 1 - e^{-T lambda'}, ||M||_inf = 1."""

    def M(t):
        return 1.0 if t <= T else 0.0

    return M, 1.0


def analytic_multiplier_holder_ratio(model: SemigroupModel, M, M_inf: float, samples,
                                     alpha: float, s_grid=None, tol: float = 1e-10) -> RatioSweep:
    """Sweep of ||m(A^{1/2}) f||_seminorm / (||M||_inf ||f||_seminorm)."""
    pairs = []
    for f in samples:
        g = analytic_multiplier_apply(model, M, f, tol)
        num = holder_seminorm(model, g, alpha, s_grid=s_grid, points_per_decade=16).value
        den = M_inf * holder_seminorm(model, f, alpha, s_grid=s_grid, points_per_decade=16).value
        pairs.append((num, den))
    return ratio_sweep(model.name, alpha, pairs)


# -- frequency-side bound on the integer model -----------------------------------------


def eta(z):
    return z * np.exp(-z / 2.0)


def discrete_sobolev_norm(coeffs: dict, order: float, grid: int = 4096) -> float:
    """|| (1 + Delta)^{order/2} m ||_{l2(Z)} for finitely supported m.

    Delta is the integer-lattice Laplacian; on the dual circle it multiplies
    by 2 - 2 cos(2 pi theta), so the weighted norm is an L2 circle integral of
    the trigonometric polynomial of m against (3 - 2 cos)^{order/2}, evaluated
    on a uniform grid (spectrally accurate for the smooth weight).
    """
    thetas = np.arange(grid) / grid
    vals = np.zeros(grid, dtype=complex)
    for k, v in coeffs.items():
        vals += v * np.exp(2j * np.pi * k * thetas)
    weight = (3.0 - 2.0 * np.cos(2.0 * np.pi * thetas)) ** (order / 2.0)
    return float(np.sqrt(np.mean(np.abs(weight * vals) ** 2)))


def marcinkiewicz_bound_and_ratio(model: SemigroupModel, m_symbol, alpha: float,
                                  sobolev_order: float, samples, t_grid=None,
                                  s_grid=None) -> dict:
    """Both sides of the frequency-multiplier bound on the truncated integer model.

    RHS: sup over t of the discrete Sobolev norm of m(k) eta(t sqrt(psi(k))).
    LHS: empirical seminorm ratio of the multiplier over random samples.
    """
    if model.kind != "fourier" or model.fourier.n != 1:
        raise ValueError("the frequency bound runs on 1-d integer models")
    fm = model.fourier
    F = fm.F
    ks = np.arange(-F, F + 1)
    psi_root = np.sqrt(fm.symbol_table(F).ravel())
    m_vals = np.asarray([m_symbol(int(k)) for k in ks], dtype=complex)
    ts = np.geomspace(1e-3 / max(psi_root.max(), 1.0), 1e3, 60) if t_grid is None else np.asarray(t_grid)
    rhs = 0.0
    t_star = ts[0]
    for t in ts:
        coeffs = dict(zip((int(k) for k in ks), m_vals * eta(t * psi_root)))
        val = discrete_sobolev_norm(coeffs, sobolev_order)
        if val > rhs:
            rhs, t_star = val, t
    pairs = []
    for f in samples:
        ks_f = np.arange(-f.radius, f.radius + 1)
        mf = np.asarray([m_symbol(int(k)) for k in ks_f], dtype=complex)
        tf = fm.element(mf * f.coeffs, f.radius)
        num = holder_seminorm(model, tf, alpha, s_grid=s_grid, points_per_decade=16).value
        den = holder_seminorm(model, f, alpha, s_grid=s_grid, points_per_decade=16).value
        pairs.append((num, den))
    sweep = ratio_sweep(model.name, alpha, pairs)
    return {
        "empirical_norm": sweep.max_ratio,
        "sobolev_bound": float(rhs),
        "bound_argmax_t": float(t_star),
        "ratio": sweep.max_ratio / rhs if rhs > 0 else np.inf,
        "sweep": sweep,
    }
