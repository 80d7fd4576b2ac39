"""Dimension-from-decay experiments: ultracontractivity, the Sobolev-type
embedding into the smoothness classes, and summability on the frequency side.

On a translation-invariant frequency model the endpoint operator norms have
exact series expressions:

    ||T_t||_{1->inf} = sum_k e^{-psi(k) t}        (positive kernel, diagonal sup)
    ||P_s||_{2->inf} = (sum_k e^{-2 s sqrt(psi(k))})^{1/2}

so the exponent fits are fits of exact values, not of sampled estimates.
"""

from __future__ import annotations

import numpy as np

from ..errors import UnsupportedPair, WindowError
from ..holder import holder_seminorm
from ..semigroup import SemigroupModel, random_element
from .sweeps import ExponentFit, RatioSweep, fit_exponent, ratio_sweep


def heat_norm_1_inf(model: SemigroupModel, t: float) -> float:
    tab = model.fourier.symbol_table(model.fourier.F).ravel()
    return float(np.sum(np.exp(-tab * t)))


def poisson_norm_2_inf(model: SemigroupModel, s: float) -> float:
    tab = model.fourier.symbol_table(model.fourier.F).ravel()
    return float(np.sqrt(np.sum(np.exp(-2.0 * s * np.sqrt(tab)))))


def poisson_norm_p_inf(model: SemigroupModel, s: float, p: float) -> float:
    """||P_s||_{p->inf} = dual L^{p'} norm of the convolution kernel.

    Exact series at p = 2; grid quadrature of the kernel otherwise.
    """
    if p == 2:
        return poisson_norm_2_inf(model, s)
    fm = model.fourier
    kernel = fm.element(np.exp(-s * np.sqrt(fm.symbol_table(fm.F))))
    pprime = p / (p - 1.0)
    return fm.lp_norm(kernel, pprime)


def ultracontractivity_fit(model: SemigroupModel, pair=(1, np.inf), t_window=(1e-3, 1e-2),
                           n_points: int = 24) -> ExponentFit:
    """Log-log fit of the endpoint operator norm; fitted n solves the decay law.

    The window must sit inside [F^{-2}, 1]: below that the frequency cutoff
    corrupts the kernel, above it the spectral gap flattens the decay.
    """
    if model.kind != "fourier":
        raise WindowError("exponent fits need a frequency model")
    lo, hi = float(t_window[0]), float(t_window[1])
    F = model.fourier.F
    if lo < F**-2 or hi > 1.0 or lo >= hi:
        raise WindowError(f"window [{lo:g}, {hi:g}] exits validity [F^-2, 1] = [{F**-2:g}, 1]")
    ts = np.geomspace(lo, hi, n_points)
    p, q = pair
    if (p, q) == (1, np.inf):
        vals = [heat_norm_1_inf(model, t) for t in ts]
        # ||T_t||_{1->inf} ~ t^{-n/2}
        return fit_exponent(ts, vals, lambda slope: -2.0 * slope)
    if (p, q) == (2, np.inf):
        vals = [poisson_norm_2_inf(model, t) for t in ts]
        # Poisson flow satisfies the doubled-exponent law: ||P_s||_{2->inf} ~ s^{-n/2}
        return fit_exponent(ts, vals, lambda slope: -2.0 * slope)
    raise UnsupportedPair(f"no exact series for pair {pair}")


def sqrt_generator_apply(model: SemigroupModel, f, power: float = 1.0):
    """A^{power/2} f on the kernel complement (inverse powers project the kernel out)."""
    def g(lam):
        lam = np.asarray(lam, dtype=float)
        root = np.sqrt(np.clip(lam, 0.0, None))
        with np.errstate(divide="ignore", invalid="ignore"):
            out = root**power
        return np.where(lam > 0, out, 0.0)

    return model.apply_profile(g, model.project_out_kernel(f) if power < 0 else f)


def morrey_ratio(model: SemigroupModel, samples, p: float, s_grid=None) -> RatioSweep:
    """||f||_{seminorm at alpha = 1 - n/p} / ||A^{1/2} f||_p per sample."""
    if model.kind != "fourier":
        raise WindowError("the embedding sweep runs on frequency models")
    n = model.fourier.n
    alpha = 1.0 - n / p
    if not 0 < alpha < 1:
        raise ValueError(f"p = {p} gives alpha = {alpha}, need p > n")
    pairs = []
    for f in samples:
        num = holder_seminorm(model, f, alpha, s_grid=s_grid, points_per_decade=16).value
        den = model.lp(sqrt_generator_apply(model, f), p)
        pairs.append((num, den))
    return ratio_sweep(model.name, alpha, pairs)


def morrey_reverse_check(model: SemigroupModel, samples, p: float, s_values=None,
                         t_window=(1e-2, 1e-1)) -> dict:
    """The converse chain: ||P_s f||_inf <= s^{alpha-1} ||A^{-1/2} f||_{seminorm}.

    Verified per sample and s (it is the definition of the sup unwound, so the
    margin measures numerics only), plus an exponent fit of the exact
    ||P_s||_{2->inf} series against n/p on the fit window.
    """
    n = model.fourier.n
    alpha = 1.0 - n / p
    ss = np.geomspace(0.02, 2.0, 12) if s_values is None else np.asarray(s_values)
    worst = -np.inf
    for f in samples:
        f0 = model.project_out_kernel(f)
        g = sqrt_generator_apply(model, f0, power=-1.0)
        semi = holder_seminorm(model, g, alpha, points_per_decade=16).value
        for s in ss:
            lhs = model.sup_norm(model.poisson_apply(s, f0))
            margin = lhs - s ** (alpha - 1.0) * semi
            worst = max(worst, margin / max(semi, 1e-300))
    ts = np.geomspace(t_window[0], t_window[1], 16)
    # the subordinated flow obeys ||P_s||_{p->inf} ~ s^{-n/p} on the window
    fit = fit_exponent(ts, [poisson_norm_p_inf(model, t, p) for t in ts], lambda sl: -sl * p)
    return {
        "worst_margin": float(worst),
        "chain_holds": bool(worst <= 1e-9),
        "exponent_fit": fit,
        "target_exponent": n / p,
        "exponent_error": float(abs(-fit.slope - n / p)),
    }


def cogrowth_estimate(model: SemigroupModel, s_values, F_values=None,
                      sobolev_epsilon: float = 0.25, sobolev_samples: int = 50,
                      rng=None, cauchy_tol: float = 1e-6) -> dict:
    """Summability of (1 + psi(k))^{-s/2} over growing boxes, with verdicts.

    For each s: 'converges' when the tail increments go Cauchy below tol,
    'diverges' with a fitted growth rate otherwise, 'inconclusive' at slow
    (logarithmic) growth.  Also sweeps the embedding constant
    max_f ||f||_inf / ||(1+A)^{s/2} f||_2 at s = n/2 + epsilon.
    """
    if model.kind != "fourier":
        raise WindowError("summability runs on frequency models")
    fm = model.fourier
    n = fm.n
    Fs = F_values if F_values is not None else [2**j for j in range(2, 1 + int(np.log2(fm.F)))]
    Fs = [F for F in Fs if F <= fm.F]
    out = {"dimension": n, "per_s": []}
    from ..models.fourier import frequency_grid

    kk = frequency_grid(n, fm.F)
    psi = fm.symbol_table(fm.F)
    radius = np.max(np.abs(kk), axis=-1)
    for s in s_values:
        sums = []
        for F in Fs:
            mask = radius <= F
            sums.append(float(np.sum((1.0 + psi[mask]) ** (-s / 2.0))))
        increments = np.diff(sums) / sums[-1]
        slope = float(np.polyfit(np.log(Fs), np.log(sums), 1)[0]) if len(Fs) > 1 else 0.0
        # dyadic increments of a p-series decay geometrically with ratio
        # 2^{n - s} < 1 exactly in the convergent range; raw Cauchy-at-1e-6
        # needs astronomically large boxes for polynomial symbols, so the
        # increment ratio carries the verdict at desk scale
        if increments.size >= 2 and increments[-2] > 0:
            inc_ratio = float(increments[-1] / increments[-2])
        else:
            inc_ratio = np.inf
        if increments.size and increments[-1] < cauchy_tol:
            verdict = "converges"
        elif inc_ratio <= 0.75:
            verdict = "converges"
        elif slope > 0.2:
            verdict = "diverges"
        else:
            verdict = "inconclusive"
        out["per_s"].append({
            "s": float(s),
            "partial_sums": sums,
            "box_radii": list(map(int, Fs)),
            "last_increment": float(increments[-1]) if increments.size else 0.0,
            "increment_ratio": inc_ratio,
            "verdict": verdict,
            "growth_rate": slope,
        })
    if rng is None:
        rng = np.random.default_rng(0)
    s_emb = n / 2.0 + sobolev_epsilon
    consts = []
    for _ in range(sobolev_samples):
        f = random_element(model, rng)
        wf = model.apply_profile(lambda lam: (1.0 + np.asarray(lam)) ** (s_emb / 2.0), f)
        consts.append(model.sup_norm(f) / model.lp(wf, 2))
    out["sobolev_order"] = s_emb
    out["sobolev_constant_max"] = float(np.max(consts))
    out["sobolev_constant_median"] = float(np.median(consts))
    return out
