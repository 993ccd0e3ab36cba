"""Histogramming, normal fits, and the one-sample Kolmogorov-Smirnov test."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, InsufficientDataError

_SQRT2 = math.sqrt(2.0)


@dataclass(frozen=True)
class Histogram:
    edges: np.ndarray    # length bins + 1, strictly increasing
    density: np.ndarray  # length bins, integrates to 1
    n_samples: int


@dataclass(frozen=True)
class NormalFit:
    mu_hat: float
    sigma_hat: float
    n: int


def histogram(samples, bins: int = 50) -> Histogram:
    """Equal-width normalized histogram spanning [min, max].

    A degenerate span (all samples equal) is widened by +-0.5 so the single
    bin still has positive width.
    """
    x = np.asarray(samples, dtype=np.float64)
    if x.size == 0:
        raise DomainError("histogram needs at least one sample")
    if bins < 1:
        raise DomainError(f"need bins >= 1, got {bins}")
    lo, hi = float(x.min()), float(x.max())
    if lo == hi:
        lo -= 0.5
        hi += 0.5
    edges = np.linspace(lo, hi, bins + 1)
    counts, _ = np.histogram(x, bins=edges)
    width = (hi - lo) / bins
    density = counts / (x.size * width)
    return Histogram(edges=edges, density=density, n_samples=x.size)


def fit_normal(samples) -> NormalFit:
    """Moment fit: sample mean and standard deviation (denominator n-1)."""
    x = np.asarray(samples, dtype=np.float64)
    if x.size < 2:
        raise InsufficientDataError("normal fit needs at least 2 samples")
    return NormalFit(mu_hat=float(x.mean()), sigma_hat=float(x.std(ddof=1)),
                     n=x.size)


def normal_cdf(x: float) -> float:
    """Standard normal CDF via erfc; absolute error well below 1e-12."""
    if not math.isfinite(x):
        raise DomainError(f"x must be finite, got {x}")
    return 0.5 * math.erfc(-x / _SQRT2)


def kolmogorov_survival(lam: float) -> float:
    """Asymptotic Kolmogorov survival function Q(lambda).

    Standard series 2 sum (-1)^(j-1) exp(-2 j^2 lambda^2) over j = 1..100.
    The series is numerically useless for tiny lambda, where the
    theta-dual form shows Q = 1 to double precision; lambda <= 0.3 returns
    exactly 1.
    """
    if lam <= 0.3:
        return 1.0
    j = np.arange(1, 101, dtype=np.float64)
    terms = np.exp(-2.0 * j * j * lam * lam)
    q = 2.0 * float((terms * (-1.0) ** (j - 1)).sum())
    return min(max(q, 0.0), 1.0)


def ks_test(samples) -> tuple[float, float]:
    """One-sample KS test against the standard normal.

    Returns (D, p) with D the sup-distance between the empirical CDF and
    Phi, and p from the asymptotic Kolmogorov distribution at sqrt(n) * D
    (no small-n correction; intended for n in the thousands).
    """
    x = np.sort(np.asarray(samples, dtype=np.float64))
    n = x.size
    if n < 8:
        raise InsufficientDataError("KS test needs at least 8 samples")
    cdf = np.array([normal_cdf(v) for v in x])
    i = np.arange(1, n + 1, dtype=np.float64)
    d_plus = float((i / n - cdf).max())
    d_minus = float((cdf - (i - 1) / n).max())
    d = max(d_plus, d_minus)
    return d, kolmogorov_survival(math.sqrt(n) * d)


def write_histogram_csv(hist: Histogram, path) -> None:
    """CSV export: header bin_left,bin_right,density; 12 significant digits."""
    with open(path, "w", encoding="utf-8") as f:
        f.write("bin_left,bin_right,density\n")
        for i in range(len(hist.density)):
            f.write(f"{hist.edges[i]:.12g},{hist.edges[i + 1]:.12g},"
                    f"{hist.density[i]:.12g}\n")


def read_histogram_csv(path) -> Histogram:
    rows = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    edges = np.append(rows[:, 0], rows[-1, 1])
    return Histogram(edges=edges, density=rows[:, 2], n_samples=0)
