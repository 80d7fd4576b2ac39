"""Gradient forms: carre du champ, iterated forms, derived forms, factorizations.

The first-order form of a generator A is

    2 Gamma(f, g) = A(f*) g + f* A(g) - A(f* g),

conjugate-linear in the first slot.  Its iterates follow the recursion
2 Gamma^{k+1}(f, g) = Gamma^k(Af, g) + Gamma^k(f, Ag) - A Gamma^k(f, g); the
sign of Gamma^2 is the curvature condition gating half the experiments in
this package.  On chains Gamma factors through the edge gradient
delta f(i)_j = sqrt(-A_ij / 2) (f_j - f_i); on Fourier backends through the
frequency gradient with components 2 pi i k_j (heat symbol) or, for a general
negative-type symbol, through the kernel
kappa(m, l) = (psi(m) + psi(l) - psi(l - m)) / 2 acting on coefficient pairs.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.signal import fftconvolve

from .errors import BackendUnsupported, IntertwiningUnverified
from .models.fourier import FourierElement, pad_to_common
from .models.qtorus import QuantumTorusElement
from .semigroup import SemigroupModel
from .spectral import eigendecompose, FiniteChainGenerator, StateSpace


def _chain_generator_matrix(model: SemigroupModel, generator: str) -> np.ndarray:
    dec = model.chain
    if generator == "heat":
        return dec.generator.matrix
    if generator == "poisson":
        # dense sqrt(A) through the spectral factorization
        w = np.sqrt(np.clip(dec.eigenvalues, 0.0, None))
        return (dec.vectors * w[None, :]) @ (dec.vectors.T * dec.mu[None, :])
    raise ValueError("generator must be 'heat' or 'poisson'")


def _fourier_symbol(model: SemigroupModel, radius: int, generator: str) -> np.ndarray:
    tab = model.fourier.symbol_table(radius)
    return np.sqrt(np.clip(tab, 0.0, None)) if generator == "poisson" else tab


def gamma(model: SemigroupModel, f, g=None, generator: str = "heat"):
    """Carre du champ Gamma(f, g); g defaults to f.

    Chains evaluate the matrix formula; Fourier backends convolve coefficients
    against the negative-type kernel of the symbol (exact for band-limited
    elements).  Deformed-torus elements need the representation, use qt_gamma.
    """
    if g is None:
        g = f
    if model.kind == "chain":
        A = _chain_generator_matrix(model, generator)
        fb = np.conj(np.asarray(f, dtype=complex))
        gv = np.asarray(g, dtype=complex)
        return 0.5 * ((A @ fb) * gv + fb * (A @ gv) - A @ (fb * gv))
    if model.kind == "fourier":
        a, b = pad_to_common(f, g)
        B = a.radius
        psi = _fourier_symbol(model, B, generator)
        fb = a.conj()
        # coefficient of the product at m + l picks up kappa(-m', l) weights;
        # realized as three symbol-weighted convolutions
        c1 = fftconvolve(fb.coeffs * psi, b.coeffs, mode="full")
        c2 = fftconvolve(fb.coeffs, b.coeffs * psi, mode="full")
        prod = fftconvolve(fb.coeffs, b.coeffs, mode="full")
        psi2 = _fourier_symbol(model, 2 * B, generator)
        out = 0.5 * (c1 + c2 - psi2 * prod)
        return FourierElement(out, 2 * B)
    if isinstance(f, QuantumTorusElement) and np.max(np.abs(f.theta)) == 0.0:
        return qt_gamma(f, g)
    raise BackendUnsupported("products on a deformed torus need qt_gamma")


def gamma_k(model: SemigroupModel, k: int, f, g=None, generator: str = "heat"):
    """Iterated form Gamma^k via the displayed recursion; k = 1 is gamma."""
    if k < 1:
        raise ValueError("iterated form order must be >= 1")
    if g is None:
        g = f
    if k == 1:
        return gamma(model, f, g, generator=generator)
    if model.kind == "chain":
        A = _chain_generator_matrix(model, generator)
        Af = A @ np.asarray(f, dtype=complex)
        Ag = A @ np.asarray(g, dtype=complex)
        prev_shift = (
            gamma_k(model, k - 1, Af, g, generator=generator)
            + gamma_k(model, k - 1, f, Ag, generator=generator)
        )
        prev = gamma_k(model, k - 1, f, g, generator=generator)
        return 0.5 * (prev_shift - A @ prev)
    if model.kind == "fourier":
        psi_f = _fourier_symbol(model, f.radius, generator)
        psi_g = _fourier_symbol(model, g.radius, generator)
        Af = FourierElement(psi_f * f.coeffs, f.radius)
        Ag = FourierElement(psi_g * g.coeffs, g.radius)
        prev_shift = (
            gamma_k(model, k - 1, Af, g, generator=generator)
            + gamma_k(model, k - 1, f, Ag, generator=generator)
        )
        prev = gamma_k(model, k - 1, f, g, generator=generator)
        psi_prev = _fourier_symbol(model, prev.radius, generator)
        return 0.5 * (prev_shift - FourierElement(psi_prev * prev.coeffs, prev.radius))
    raise BackendUnsupported("iterated forms need a chain or Fourier backend")


# -- curvature check -------------------------------------------------------------


@dataclass(frozen=True)
class CurvatureVerdict:
    """Outcome of the per-state PSD scan of the iterated form."""

    passed: bool
    min_eigenvalue: float
    worst_state: int
    worst_vector: np.ndarray
    state_minima: np.ndarray

    def __bool__(self) -> bool:
        return self.passed


def _gamma2_state(A: np.ndarray, A2: np.ndarray, x: int) -> np.ndarray:
    """Closed form of the polarized matrix Q_x[i, j] = Gamma^2(e_i, e_j)(x).

    Expanding the recursion over the standard basis collapses the three basis
    sums to products of rows of A and A^2; no N^3 tensor is ever materialized.
    """
    N = A.shape[0]
    Q = 0.5 * (
        np.outer(A[x], A[x]) - A[x][None, :] * A.T - A[x][:, None] * A
    )
    Q[np.arange(N), np.arange(N)] += 0.25 * A2[x]
    Q[:, x] += 0.25 * A2[x]
    Q[x, :] += 0.25 * A2[x]
    return 0.5 * (Q + Q.T)


def gamma2_matrices(model: SemigroupModel, generator: str = "heat") -> np.ndarray:
    """Hermitian matrices Q_x with <f, Q_x f> = Gamma^2[f](x), one per state."""
    if model.kind != "chain":
        raise BackendUnsupported("per-state curvature matrices need a chain")
    A = _chain_generator_matrix(model, generator)
    N = A.shape[0]
    if N > 512:
        raise BackendUnsupported("curvature scan capped at 512 states")
    A2 = A @ A
    return np.stack([_gamma2_state(A, A2, x) for x in range(N)])


def gamma2_psd_check(model: SemigroupModel, generator: str = "heat",
                     tol: float = 1e-9) -> CurvatureVerdict:
    """Per-state minimum eigenvalue of the Gamma^2 quadratic form.

    Passes when every state's form has min eigenvalue >= -tol * ||Q_x||; the
    worst state and its eigenvector witness are always reported.

    Fourier backends reduce to a single Hermitian matrix by translation
    invariance: the Hadamard square of the negative-type kernel of the symbol
    (positivity there is structural, the scan is a numerical confirmation).
    """
    if model.kind == "fourier":
        # translation invariance collapses the scan to one Hermitian matrix at
        # x = 0: the Hadamard square of the negative-type kernel of the symbol
        # (PSD by the Schur product theorem whenever the symbol is of negative
        # type; the eigenvalue scan is a numerical confirmation on a box
        # capped to keep the eigenproblem desk-sized)
        fm = model.fourier
        from .models.fourier import frequency_grid

        radius = fm.F
        while (2 * radius + 1) ** fm.n > 1024:
            radius -= 1
        kk = frequency_grid(fm.n, radius).reshape(-1, fm.n)
        psi = fm.symbol_table(radius).ravel()
        if generator == "poisson":
            psi = np.sqrt(np.clip(psi, 0.0, None))
        diff = kk[None, :, :] - kk[:, None, :]
        psi_diff = np.asarray(
            fm.psi(diff) if generator == "heat" else np.sqrt(np.clip(fm.psi(diff), 0.0, None))
        )
        kappa = 0.5 * (psi[:, None] + psi[None, :] - psi_diff)
        Q = kappa**2
        lam, V = np.linalg.eigh(Q)
        scale = max(float(np.max(np.abs(Q))), 1e-300)
        lam_min = float(lam[0]) / scale
        ok = lam_min >= -tol
        return CurvatureVerdict(ok, lam_min, 0, V[:, 0], np.array([lam_min]))

    Q = gamma2_matrices(model, generator)
    minima = np.empty(Q.shape[0])
    worst = (np.inf, 0, None)
    for x in range(Q.shape[0]):
        lam, V = np.linalg.eigh(Q[x])
        scale = max(float(np.max(np.abs(lam))), 1e-300)
        minima[x] = lam[0] / scale
        if lam[0] / scale < worst[0]:
            worst = (lam[0] / scale, x, V[:, 0])
    passed = bool(worst[0] >= -tol)
    return CurvatureVerdict(passed, float(worst[0]), int(worst[1]), worst[2], minima)


def gamma2_verified(model: SemigroupModel) -> bool:
    """Convenience gate used by the curvature-dependent experiments."""
    if model.kind == "qtorus":
        return True  # heat symbol on the deformed torus: Schur-square of a PSD kernel
    return bool(gamma2_psd_check(model))


# -- space-time form, derived forms -------------------------------------------------


def space_time_gamma(model: SemigroupModel, f, df, generator: str = "heat"):
    """Gamma-hat[f] = Gamma[f] + |df|^2 for a profile f with s-derivative df."""
    g = gamma(model, f, f, generator=generator)
    if model.kind == "chain":
        return g + np.abs(np.asarray(df)) ** 2
    return g + df.conj() * df


def derived_form(model: SemigroupModel, B, f, g=None):
    """B'(f, g) = (B(Af, g) + B(f, Ag) - A B(f, g)) / 2.

    B is a callable sesquilinear form (f, g) -> values that conjugates its
    first slot itself, e.g. B = lambda f, g: np.conj(f) * g.
    """
    if model.kind != "chain":
        raise BackendUnsupported("derived forms of callables need a chain")
    if g is None:
        g = f
    A = model.chain.generator.matrix
    f = np.asarray(f, dtype=complex)
    g = np.asarray(g, dtype=complex)
    return 0.5 * (B(A @ f, g) + B(f, A @ g) - A @ B(f, g))


@dataclass(frozen=True)
class DerivedFormReport:
    flow_inequality_holds: bool
    derived_positive: bool
    agree: bool
    worst_flow_violation: float
    worst_sign_violation: float


def derived_form_check(model: SemigroupModel, B, t_grid, samples, tol: float = 1e-9) -> DerivedFormReport:
    """Numerically confront B[T_t f] <= T_t B[f] with positivity of B'.

    Both sides are tested on the given samples; the report says whether the
    two verdicts agree (they are equivalent for genuine bilinear forms).
    """
    worst_flow = -np.inf
    worst_sign = -np.inf
    for f in samples:
        bf = B(f, f)
        for t in t_grid:
            tf = model.heat_apply(t, f)
            lhs = B(tf, tf)
            rhs = model.heat_apply(t, bf)
            worst_flow = max(worst_flow, float(np.max(lhs.real - rhs.real)))
        dpos = derived_form(model, B, f)
        worst_sign = max(worst_sign, float(np.max(-dpos.real)))
    flow_ok = worst_flow <= tol
    sign_ok = worst_sign <= tol
    return DerivedFormReport(
        flow_inequality_holds=flow_ok,
        derived_positive=sign_ok,
        agree=flow_ok == sign_ok,
        worst_flow_violation=worst_flow,
        worst_sign_violation=worst_sign,
    )


# -- explicit gradients ---------------------------------------------------------------


@dataclass(frozen=True)
class GradientField:
    """Per-state vectors in a finite fiber with |delta f(x)|^2 = Gamma[f](x).

    kind 'chain': components[j] indexes the neighbour j (fiber dim = N).
    kind 'fourier': components[j] is the j-th partial derivative (fiber dim = n).
    """

    kind: str
    components: tuple
    intertwines: bool

    def fiber_norm_squared(self, model: SemigroupModel):
        if self.kind == "chain":
            stack = np.stack([np.abs(np.asarray(c)) ** 2 for c in self.components])
            return stack.sum(axis=0)
        out = None
        for c in self.components:
            term = c.conj() * c
            out = term if out is None else out + term
        return out


def gradient_map(model: SemigroupModel, f, generator: str = "heat") -> GradientField:
    """Explicit factorization delta with <delta f, delta g> = Gamma(f, g)."""
    if model.kind == "chain":
        if generator != "heat":
            raise BackendUnsupported("edge gradient is pinned to the heat generator")
        A = model.chain.generator.matrix
        f = np.asarray(f, dtype=complex)
        comps = []
        for j in range(A.shape[0]):
            w = np.sqrt(np.clip(-A[:, j], 0.0, None) / 2.0)
            w[j] = 0.0
            comps.append(w * (f[j] - f))
        return GradientField("chain", tuple(comps), intertwines=False)
    if model.kind == "fourier":
        fm = model.fourier
        if not _is_heat_symbol(fm):
            raise IntertwiningUnverified("frequency gradient needs the heat symbol")
        from .models.fourier import frequency_grid

        kk = frequency_grid(fm.n, f.radius)
        comps = []
        for j in range(fm.n):
            comps.append(FourierElement(2j * np.pi * kk[..., j] * f.coeffs, f.radius))
        return GradientField("fourier", tuple(comps), intertwines=True)
    raise BackendUnsupported("gradient fields need a chain or Fourier backend")


def _is_heat_symbol(fm) -> bool:
    tab = fm.symbol_table(fm.F)
    from .models.fourier import frequency_grid

    kk = frequency_grid(fm.n, fm.F)
    heat = 4.0 * np.pi**2 * np.sum(kk.astype(float) ** 2, axis=-1)
    return bool(np.max(np.abs(tab - heat)) <= 1e-9 * max(np.max(heat), 1.0))


# -- the decreasing-energy identity ---------------------------------------------------


def G_s_function(model: SemigroupModel, f, s: float):
    """Decreasing energy G_s = dP_s(|P_s f|^2) - P_s((dP_s f)* P_s f) - P_s((P_s f)* dP_s f).

    Signs are fixed so that G is nonnegative, decreasing, G_0 = 2 Gamma_{sqrt A}[f]
    and -dG_s/ds = 2 P_s Gamma-hat[P_s f] holds exactly (symbolic eigenfunction
    calculus pins this orientation; the opposite one flips the derivative
    identity's sign).
    """
    g0 = model.poisson_apply(s, f)
    g1 = model.poisson_derivative(s, f, 1)
    t1 = model.poisson_apply(s, model.multiply(model.conj(g1), g0))
    t2 = model.poisson_apply(s, model.multiply(model.conj(g0), g1))
    sq = model.multiply(model.conj(g0), g0)
    t3 = _poisson_derivative_of(model, s, sq)
    return t3 - t1 - t2


def _poisson_derivative_of(model: SemigroupModel, s: float, u):
    return model.apply_profile(lambda l: -np.sqrt(l) * np.exp(-s * np.sqrt(l)), u)


def G_s_identity_check(model: SemigroupModel, f, s_grid) -> float:
    """Max relative sup-norm error of -dG_s/ds = 2 P_s Gamma-hat[P_s f].

    Both sides are evaluated in exact diagonal arithmetic: the s-derivative of
    G_s expands by the product rule with every factor a known diagonal flow,
    never by finite differences.
    """
    worst = 0.0
    for s in s_grid:
        g0 = model.poisson_apply(s, f)
        g1 = model.poisson_derivative(s, f, 1)
        g2 = model.poisson_derivative(s, f, 2)

        u1 = model.multiply(model.conj(g1), g0)
        du1 = model.multiply(model.conj(g2), g0) + model.multiply(model.conj(g1), g1)
        d_t1 = _poisson_derivative_of(model, s, u1) + model.poisson_apply(s, du1)

        u2 = model.multiply(model.conj(g0), g1)
        du2 = model.multiply(model.conj(g1), g1) + model.multiply(model.conj(g0), g2)
        d_t2 = _poisson_derivative_of(model, s, u2) + model.poisson_apply(s, du2)

        sq = model.multiply(model.conj(g0), g0)
        dsq = u1 + u2
        d_t3 = model.apply_profile(lambda l: l * np.exp(-s * np.sqrt(l)), sq) \
            + _poisson_derivative_of(model, s, dsq)

        lhs = -(d_t3 - d_t1 - d_t2)
        ghat = space_time_gamma(model, g0, g1)
        rhs = 2.0 * model.poisson_apply(s, ghat)
        diff = model.sup_norm(lhs - rhs)
        scale = max(model.sup_norm(rhs), model.sup_norm(lhs), 1e-300)
        worst = max(worst, diff / scale)
    return worst


# -- deformed torus gradient ------------------------------------------------------------


def qt_gamma(f: QuantumTorusElement, g: QuantumTorusElement | None = None) -> QuantumTorusElement:
    """Gamma(f, g) = sum_j (d_j f)* (d_j g) with d_j scaling coefficients by 2 pi i k_j."""
    if g is None:
        g = f
    out = None
    for j in range(f.n):
        dfj = QuantumTorusElement(
            f.n, f.theta, {k: 2j * np.pi * k[j] * v for k, v in f.coeffs.items()}
        )
        dgj = QuantumTorusElement(
            g.n, g.theta, {k: 2j * np.pi * k[j] * v for k, v in g.coeffs.items()}
        )
        term = dfj.adjoint() * dgj
        out = term if out is None else out + term
    if out is None:
        out = QuantumTorusElement(f.n, f.theta, {})
    return out
