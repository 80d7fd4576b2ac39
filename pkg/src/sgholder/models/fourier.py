"""Fourier-side semigroup backends: the flat torus and truncated integer-group models.

Functions are trigonometric polynomials held by their coefficient box: a
complex array of shape (2B+1,)^n indexed by frequencies k in [-B, B]^n.
Products are exact coefficient convolutions (the box grows), sup-norms are
evaluated on an oversampled uniform grid and are therefore under-
approximations of the true sup; the l1 coefficient bound is available as the
matching upper bound.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.signal import fftconvolve


@dataclass(frozen=True)
class FourierElement:
    """Trigonometric polynomial with coefficient box of radius ``radius``."""

    coeffs: np.ndarray
    radius: int

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=complex)
        side = 2 * self.radius + 1
        if any(s != side for s in c.shape):
            raise ValueError(f"coefficient array shape {c.shape} != box of radius {self.radius}")
        object.__setattr__(self, "coeffs", c)

    @property
    def ndim(self) -> int:
        return self.coeffs.ndim

    def __add__(self, other):
        a, b = pad_to_common(self, other)
        return FourierElement(a.coeffs + b.coeffs, a.radius)

    def __sub__(self, other):
        a, b = pad_to_common(self, other)
        return FourierElement(a.coeffs - b.coeffs, a.radius)

    def __mul__(self, other):
        if isinstance(other, FourierElement):
            return multiply(self, other)
        return FourierElement(self.coeffs * other, self.radius)

    __rmul__ = __mul__

    def __neg__(self):
        return FourierElement(-self.coeffs, self.radius)

    def conj(self) -> "FourierElement":
        flipped = self.coeffs.conj()
        for ax in range(self.coeffs.ndim):
            flipped = np.flip(flipped, axis=ax)
        return FourierElement(flipped, self.radius)

    def abs2(self) -> "FourierElement":
        """Coefficients of |f|^2 = conj(f) * f."""
        return multiply(self.conj(), self)

    def coefficient(self, k) -> complex:
        idx = tuple(int(ki) + self.radius for ki in np.atleast_1d(k))
        return complex(self.coeffs[idx])

    def l1_coefficient_bound(self) -> float:
        return float(np.sum(np.abs(self.coeffs)))


def frequency_grid(n: int, radius: int) -> np.ndarray:
    """Array of shape (2B+1,)^n + (n,) with the integer frequency at each slot."""
    axes = [np.arange(-radius, radius + 1)] * n
    return np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1)


def pad_to_common(a: FourierElement, b: FourierElement):
    B = max(a.radius, b.radius)
    return pad_element(a, B), pad_element(b, B)


def pad_element(e: FourierElement, radius: int) -> FourierElement:
    if radius == e.radius:
        return e
    if radius < e.radius:
        raise ValueError("cannot shrink a coefficient box")
    pad = radius - e.radius
    c = np.pad(e.coeffs, [(pad, pad)] * e.coeffs.ndim)
    return FourierElement(c, radius)


def multiply(a: FourierElement, b: FourierElement) -> FourierElement:
    """Exact product of trig polynomials: full coefficient convolution."""
    c = fftconvolve(a.coeffs, b.coeffs, mode="full")
    # coefficients are exact integers of the k-lattice; kill fft noise symmetrically
    return FourierElement(c, a.radius + b.radius)


def grid_values(coeffs: np.ndarray, radius: int, R: int) -> np.ndarray:
    """Values of sum_k a_k e^{2 pi i <k, x>} on the uniform grid (j/R)_j per axis."""
    n = coeffs.ndim
    if R < 2 * radius + 1:
        raise ValueError("grid too coarse for this coefficient box")
    slots = np.zeros((R,) * n, dtype=complex)
    idx = np.arange(-radius, radius + 1) % R
    slots[np.ix_(*([idx] * n))] = coeffs
    return np.fft.ifftn(slots) * (R**n)


def grid_values_batch(rows: np.ndarray, radius: int, R: int) -> np.ndarray:
    """Batched 1-d version of grid_values: rows (m, 2B+1) -> values (m, R)."""
    m, side = rows.shape
    if R < side:
        raise ValueError("grid too coarse for this coefficient box")
    slots = np.zeros((m, R), dtype=complex)
    slots[:, np.arange(-radius, radius + 1) % R] = rows
    return np.fft.ifft(slots, axis=1) * R


class FourierModel:
    """Truncated frequency model with symbol psi(k) >= 0, psi(0) = 0.

    ``n`` is the dimension, ``F`` the base box radius and ``R`` the per-axis
    sampling resolution used for sup-norms (oversampling factor >= 4 of the
    base box; elements with grown boxes get a matching finer grid on the fly).
    """

    def __init__(self, n: int, F: int, psi, R: int | None = None, name: str = "fourier"):
        if n < 1 or F < 1:
            raise ValueError("need n >= 1 and F >= 1")
        self.n = int(n)
        self.F = int(F)
        self.R = int(R) if R is not None else 4 * (2 * self.F + 1)
        if self.R < 4 * (2 * self.F + 1):
            raise ValueError("R must give oversampling factor >= 4")
        self.name = name
        self._psi = psi
        self._tables: dict[int, np.ndarray] = {}
        tab = self.symbol_table(self.F)
        center = (self.F,) * self.n
        if abs(tab[center]) > 1e-12:
            raise ValueError("symbol must vanish at k = 0")
        if np.any(tab < -1e-12):
            raise ValueError("symbol must be nonnegative")
        flip = tab
        for ax in range(self.n):
            flip = np.flip(flip, axis=ax)
        if np.max(np.abs(tab - flip)) > 1e-10 * max(np.max(tab), 1.0):
            raise ValueError("symbol must be even: psi(k) = psi(-k)")

    def psi(self, k) -> np.ndarray:
        return np.asarray(self._psi(np.asarray(k)), dtype=float)

    def symbol_table(self, radius: int) -> np.ndarray:
        """psi on the box of given radius, cached; shape (2B+1,)^n."""
        if radius not in self._tables:
            kk = frequency_grid(self.n, radius)
            self._tables[radius] = np.asarray(self._psi(kk), dtype=float)
        return self._tables[radius]

    # -- element construction ------------------------------------------------

    def element(self, coeffs, radius: int | None = None) -> FourierElement:
        radius = self.F if radius is None else radius
        return FourierElement(np.asarray(coeffs, dtype=complex), radius)

    def from_modes(self, modes: dict) -> FourierElement:
        """Element from a {frequency tuple: coefficient} mapping."""
        keys = [np.atleast_1d(k) for k in modes]
        B = max(int(np.max(np.abs(k))) for k in keys) if keys else 1
        B = max(B, 1)
        c = np.zeros((2 * B + 1,) * self.n, dtype=complex)
        for k, v in modes.items():
            idx = tuple(int(ki) + B for ki in np.atleast_1d(k))
            c[idx] = v
        return FourierElement(c, B)

    def zero(self) -> FourierElement:
        return FourierElement(np.zeros((3,) * self.n, dtype=complex), 1)

    # -- calculus ------------------------------------------------------------

    def apply_symbol_function(self, g, e: FourierElement) -> FourierElement:
        """Diagonal action a_k -> g(psi(k)) a_k on the element's own box."""
        tab = self.symbol_table(e.radius)
        return FourierElement(np.asarray(g(tab), dtype=complex) * e.coeffs, e.radius)

    def grid(self, e: FourierElement) -> np.ndarray:
        R = max(self.R, 4 * (2 * e.radius + 1))
        return grid_values(e.coeffs, e.radius, R)

    # -- norms ---------------------------------------------------------------

    def sup_norm(self, e: FourierElement) -> float:
        return float(np.max(np.abs(self.grid(e))))

    def lp_norm(self, e: FourierElement, p: float) -> float:
        if p == np.inf:
            return self.sup_norm(e)
        if p == 2:
            return float(np.linalg.norm(e.coeffs.ravel()))
        if p == 4:
            return float(np.linalg.norm(e.abs2().coeffs.ravel()) ** 0.5)
        vals = np.abs(self.grid(e))
        return float((np.mean(vals**p)) ** (1.0 / p))

    def trace(self, e: FourierElement) -> complex:
        return e.coefficient((0,) * self.n)

    def quotient_sup_norm(self, e: FourierElement) -> float:
        """inf over constants c of the grid sup of |f - c|."""
        from ..spectral import enclosing_disk_radius

        vals = self.grid(e).ravel()
        if np.max(np.abs(vals.imag)) <= 1e-13 * max(np.max(np.abs(vals)), 1e-300):
            re = vals.real
            return float((re.max() - re.min()) / 2.0)
        return enclosing_disk_radius(vals)

    def project_out_kernel(self, e: FourierElement) -> FourierElement:
        c = e.coeffs.copy()
        c[(e.radius,) * self.n] = 0.0
        return FourierElement(c, e.radius)

    # -- spectral summaries ---------------------------------------------------

    @property
    def lambda_max(self) -> float:
        return float(np.max(self.symbol_table(self.F)))

    @property
    def lambda_min_positive(self) -> float:
        tab = self.symbol_table(self.F).ravel()
        pos = tab[tab > 1e-12 * max(np.max(tab), 1.0)]
        return float(np.min(pos)) if pos.size else self.lambda_max


def torus_model(n: int, F: int, R: int | None = None) -> FourierModel:
    """Flat n-torus with the heat symbol psi(k) = 4 pi^2 |k|^2."""

    def psi(kk):
        kk = np.asarray(kk, dtype=float)
        return 4.0 * np.pi**2 * np.sum(kk**2, axis=-1)

    return FourierModel(n, F, psi, R=R, name=f"torus{n}d_F{F}")


def integer_group_model(F: int, psi, R: int | None = None, name: str | None = None) -> FourierModel:
    """Truncated model over the integers with a caller-supplied symbol.

    psi maps integer frequencies to R_+; negative-type validity on the
    truncation is the caller's business (see conditionally_negative_check).
    The function side is the dual circle sampled on R points.
    """

    def psi_grid(kk):
        kk = np.asarray(kk, dtype=float)
        return np.asarray(psi(kk[..., 0]), dtype=float)

    return FourierModel(1, F, psi_grid, R=R, name=name or f"zgroup_F{F}")
