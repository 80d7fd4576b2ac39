"""Ratio-sweep and exponent-fit records shared by the boundedness experiments."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class RatioSweep:
    """Per-sample numerator/denominator pairs with the usual summary statistics.

    ``stable`` means the max ratio moved by less than the stability threshold
    when the sample count doubled (the second half of the arrays being the
    doubling extension).
    """

    model: str
    alpha: float
    sample_count: int
    numerators: np.ndarray = field(repr=False)
    denominators: np.ndarray = field(repr=False)
    stability_threshold: float = 0.10

    @property
    def ratios(self) -> np.ndarray:
        d = self.denominators
        return np.where(d > 0, self.numerators / np.where(d > 0, d, 1.0), np.nan)

    def _finite(self) -> np.ndarray:
        r = self.ratios
        return r[np.isfinite(r)]

    @property
    def max_ratio(self) -> float:
        r = self._finite()
        return float(np.max(r)) if r.size else np.nan

    @property
    def min_ratio(self) -> float:
        r = self._finite()
        return float(np.min(r)) if r.size else np.nan

    @property
    def median_ratio(self) -> float:
        r = self._finite()
        return float(np.median(r)) if r.size else np.nan

    @property
    def stability_change(self) -> float:
        """Relative growth of the max ratio from the first half to the full sweep."""
        r = self.ratios
        half = r[: self.sample_count // 2]
        half = half[np.isfinite(half)]
        full = self._finite()
        if half.size == 0 or full.size == 0:
            return np.nan
        m_half, m_full = float(np.max(half)), float(np.max(full))
        return (m_full - m_half) / m_half if m_half > 0 else np.nan

    @property
    def stable(self) -> bool:
        c = self.stability_change
        return bool(np.isfinite(c) and c < self.stability_threshold)

    def summary(self) -> dict:
        return {
            "model": self.model,
            "alpha": self.alpha,
            "samples": self.sample_count,
            "max_ratio": self.max_ratio,
            "min_ratio": self.min_ratio,
            "median_ratio": self.median_ratio,
            "stability_change": float(self.stability_change),
            "stable": self.stable,
        }


def ratio_sweep(model_name: str, alpha: float, pairs, threshold: float = 0.10) -> RatioSweep:
    pairs = list(pairs)
    num = np.asarray([p[0] for p in pairs], dtype=float)
    den = np.asarray([p[1] for p in pairs], dtype=float)
    return RatioSweep(model_name, alpha, len(pairs), num, den, threshold)


@dataclass(frozen=True)
class ExponentFit:
    """Least-squares log-log fit over a time window."""

    t_window: tuple
    slope: float
    intercept: float
    residual: float
    fitted_n: float

    def summary(self) -> dict:
        return {
            "window": list(self.t_window),
            "slope": self.slope,
            "intercept": self.intercept,
            "residual": self.residual,
            "fitted_n": self.fitted_n,
        }


def fit_exponent(ts, values, n_from_slope) -> ExponentFit:
    ts = np.asarray(ts, dtype=float)
    values = np.asarray(values, dtype=float)
    x, y = np.log(ts), np.log(values)
    slope, intercept = np.polyfit(x, y, 1)
    residual = float(np.max(np.abs(y - (slope * x + intercept))))
    return ExponentFit(
        t_window=(float(ts[0]), float(ts[-1])),
        slope=float(slope),
        intercept=float(intercept),
        residual=residual,
        fitted_n=float(n_from_slope(slope)),
    )
