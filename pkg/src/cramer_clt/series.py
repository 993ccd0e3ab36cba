"""Character series over pseudo-prime states and their CLT normalizations.

Two summation conventions appear throughout:

* stopped prefix -- sum over all integers n <= p'_N where p'_N is the N-th
  member of the state.  This is the defining form of the series operations
  below.

* deterministic prefix -- sum over n <= floor(N log N), the classical
  approximation for the position of the N-th member.  The ensemble
  experiments use this form: with it, the summands stay independent and
  the aggregate Bernoulli variance is s^2 N / (1 + loglog N / log N) to
  high accuracy, which is exactly what the normalization below divides
  out.  ``series_up_to`` evaluates either form given an explicit limit.

The oscillatory-series mean is expressed through Re Ei((1+it) log x), the
antiderivative of cos(t log u)/log u; it is evaluated with mpmath at
elevated precision and cross-checked against adaptive quadrature in the
test suite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import mpmath as mp
import numpy as np

from .characters import DirichletCharacter, principal_character, totient
from .errors import DomainError, WrongSeriesError
from .pseudoprimes import PseudoPrimeState, nth_pseudoprime

_EI_DPS = 30


@dataclass(frozen=True)
class SeriesResult:
    """One evaluated, normalized series value."""

    raw: float
    n_terms: int
    t: float
    mean: float
    variance: float
    normalized: float
    state_seed: int
    modulus: int


def deterministic_limit(n_terms: int) -> int:
    """floor(N log N): deterministic stand-in for the N-th member position."""
    if n_terms < 2:
        raise DomainError(f"need n_terms >= 2, got {n_terms}")
    return int(n_terms * math.log(n_terms))


def log_weight_factor(n_terms: int) -> float:
    """1 + loglog N / log N, the finite-size factor in the normalizations."""
    if n_terms < 3:
        raise DomainError(f"need n_terms >= 3, got {n_terms}")
    ln = math.log(n_terms)
    return 1.0 + math.log(ln) / ln


def cos_coefficients(chi: DirichletCharacter, t: float, limit: int) -> np.ndarray:
    """cos(theta_n + t log n) for n = 0..limit, zero where chi(n) = 0 or n < 3."""
    if not math.isfinite(t):
        raise DomainError(f"t must be finite, got {t}")
    k = chi.modulus
    theta = np.array([math.nan if q is None else 2.0 * math.pi * float(q)
                      for q in chi.values])
    res = np.arange(limit + 1) % k
    th = theta[res]
    mask = ~np.isnan(th)
    mask[:3] = False
    coef = np.zeros(limit + 1)
    n_ok = np.flatnonzero(mask)
    if t == 0.0:
        coef[n_ok] = np.cos(th[n_ok])
    else:
        coef[n_ok] = np.cos(th[n_ok] + t * np.log(n_ok.astype(np.float64)))
    return coef


def series_up_to(state: PseudoPrimeState, chi: DirichletCharacter,
                 t: float, limit: int) -> float:
    """Sum of z_n * cos(theta_n + t log n) over 3 <= n <= limit."""
    if limit > state.cutoff:
        raise DomainError(
            f"limit {limit} exceeds state cutoff {state.cutoff}; resample larger")
    coef = cos_coefficients(chi, t, limit)
    return float(state.membership[: limit + 1] @ coef)


def mixed_series(state: PseudoPrimeState, chi: DirichletCharacter,
                 t: float, n_terms: int) -> float:
    """Stopped-prefix series: sum up to the N-th member of the state."""
    if n_terms == 0:
        return 0.0
    limit = nth_pseudoprime(state, n_terms)
    return series_up_to(state, chi, t, limit)


def angle_series(state: PseudoPrimeState, chi: DirichletCharacter,
                 n_terms: int) -> float:
    """Pure character-angle series (t = 0); non-principal characters only."""
    if chi.principal:
        raise WrongSeriesError(
            "angle series needs a non-principal character; "
            "use oscillatory_series for the principal case")
    return mixed_series(state, chi, 0.0, n_terms)


def oscillatory_series(state: PseudoPrimeState, t: float, n_terms: int,
                       modulus: int = 1) -> float:
    """Principal-character series: sum of z_{n,k} cos(t log n) over the prefix."""
    return mixed_series(state, principal_character(modulus), t, n_terms)


def normalize_angle_series(raw: float, n_terms: int, modulus: int,
                           a_factor) -> float:
    """CLT normalization of the angle series; the mean is taken as 0.

    Multiplies by sqrt((1 + loglogN/logN) / (s^2 N)) with
    s^2 = a * phi(k) / k.
    """
    s2 = float(a_factor) * totient(modulus) / modulus
    return math.sqrt(log_weight_factor(n_terms) / (s2 * n_terms)) * raw


def ei_cos_antiderivative(t: float, x: float) -> float:
    """Re Ei((1+it) log x): antiderivative of cos(t log u) / log u.

    Differences of this function over x are definite integrals of the
    oscillatory kernel; x must exceed the logarithmic singularity at 1.
    """
    if not math.isfinite(t):
        raise DomainError(f"t must be finite, got {t}")
    if x <= 1.0:
        raise DomainError(f"x must be > 1, got {x}")
    with mp.workdps(_EI_DPS):
        return float(mp.re(mp.ei((1 + 1j * t) * mp.log(x))))


def ei_cos_integral(t: float, x1: float, x2: float) -> float:
    """Integral of cos(t log u)/log u over [x1, x2], via the Ei antiderivative.

    The subtraction happens at working precision, so nearly-equal endpoints
    do not lose accuracy.
    """
    if not math.isfinite(t):
        raise DomainError(f"t must be finite, got {t}")
    if x1 <= 1.0 or x2 <= 1.0:
        raise DomainError("integration limits must be > 1")
    with mp.workdps(_EI_DPS):
        s = 1 + 1j * t
        return float(mp.re(mp.ei(s * mp.log(x2)) - mp.ei(s * mp.log(x1))))


def oscillatory_mean(t: float, n_terms: int, modulus: int = 1) -> float:
    """Expected value of the oscillatory series.

    (phi(k)/k) * integral of cos(t log u)/log u over [3, N log N].
    """
    if n_terms < 3:
        raise DomainError(f"need n_terms >= 3, got {n_terms}")
    frac = totient(modulus) / modulus
    return frac * ei_cos_integral(t, 3.0, n_terms * math.log(n_terms))


def oscillatory_mean_approx(t: float, n_terms: int, modulus: int = 1) -> float:
    """Large-t closed form of the oscillatory mean.

    (phi(k)/k) * [N / (1 + loglogN/logN)] * [t/(1+t^2)] * sin(t log(N log N)).
    Accurate once t is large enough that the cos endpoint term (down by 1/t)
    is negligible; used as a cross-check of the Ei evaluation.
    """
    if n_terms < 3:
        raise DomainError(f"need n_terms >= 3, got {n_terms}")
    if t == 0.0:
        return 0.0
    frac = totient(modulus) / modulus
    envelope = n_terms / log_weight_factor(n_terms)
    return (frac * envelope * (t / (1.0 + t * t))
            * math.sin(t * math.log(n_terms * math.log(n_terms))))


def oscillatory_variance(t: float, n_terms: int, modulus: int = 1,
                         large_t: bool = False) -> float:
    """Aggregate variance of the oscillatory series.

    Full form: (phi(k)/2k) * [N/(1 + loglogN/logN) + Ei-part], where the
    first piece is the leading order of the 1/log n mass over the prefix
    (the higher-order corrections cancel against the Bernoulli q^2 terms)
    and the Ei part is the oscillatory 2t-frequency correction over
    [3, N log N].  With ``large_t`` the O(1/t) Ei part is dropped.
    """
    if n_terms < 3:
        raise DomainError(f"need n_terms >= 3, got {n_terms}")
    half_frac = totient(modulus) / (2.0 * modulus)
    base = n_terms / log_weight_factor(n_terms)
    if large_t:
        return half_frac * base
    ei_part = ei_cos_integral(2.0 * t, 3.0, n_terms * math.log(n_terms))
    return half_frac * (base + ei_part)


def normalize_oscillatory_series(raw: float, t: float, n_terms: int,
                                 modulus: int = 1) -> float:
    """CLT normalization of the oscillatory series.

    sqrt((1 + loglogN/logN) / (s^2 N)) * (raw - mean), s^2 = phi(k)/2k.
    """
    s2 = totient(modulus) / (2.0 * modulus)
    mean = oscillatory_mean(t, n_terms, modulus)
    return math.sqrt(log_weight_factor(n_terms) / (s2 * n_terms)) * (raw - mean)


def lyapunov_ratio(n_terms: int, delta: float, *, chi: DirichletCharacter | None = None,
                   t: float = 0.0, modulus: int = 1) -> float:
    """Lyapunov CLT ratio at exponent 2 + delta, computed analytically.

    Each summand is a Bernoulli(q_n) indicator times a cosine factor c_n,
    q_n = 1/log n, so E|x_n - mu_n|^(2+d) has the closed form
    q(1-q)[(1-q)^(1+d) + q^(1+d)] |c|^(2+d).  The sum runs over the
    deterministic prefix n <= max(3, floor(N log N)); the ratio divides by
    the aggregate standard deviation to the power 2 + delta and decays like
    N^(-delta/2) when the CLT applies.
    """
    if delta <= 0:
        raise DomainError(f"delta must be > 0, got {delta}")
    if n_terms < 1:
        raise DomainError(f"need n_terms >= 1, got {n_terms}")
    upper = max(3, int(n_terms * math.log(max(n_terms, 2))))
    if chi is None:
        chi = principal_character(modulus)
    c = cos_coefficients(chi, t, upper)[3:]
    n = np.arange(3, upper + 1)
    q = 1.0 / np.log(n)
    var_terms = q * (1.0 - q) * c * c
    s2 = float(var_terms.sum())
    moments = (q * (1.0 - q) * ((1.0 - q) ** (1.0 + delta) + q ** (1.0 + delta))
               * np.abs(c) ** (2.0 + delta))
    return float(moments.sum()) / s2 ** ((2.0 + delta) / 2.0)


def gaussian_tail_estimate(kappa: float, epsilon: float, n_terms: int) -> float:
    """Two-term Gaussian estimate of Pr[series <= s * kappa * N^(1/2+eps)].

    1 - exp(-kappa^2 N^(2 eps)) / (sqrt(2 pi) kappa N^eps), the explicit
    part of the upper-tail expansion with the relative O(1/(kappa^2 N^2eps))
    correction dropped; an upper-tail estimate, approaching 1 as N grows
    for any eps > 0.
    """
    if kappa <= 0:
        raise DomainError(f"kappa must be > 0, got {kappa}")
    if epsilon < 0:
        raise DomainError(f"epsilon must be >= 0, got {epsilon}")
    if n_terms < 3:
        raise DomainError(f"need n_terms >= 3, got {n_terms}")
    scale = kappa * n_terms**epsilon
    return 1.0 - math.exp(-(scale * scale)) / (math.sqrt(2.0 * math.pi) * scale)
