"""Euler products over pseudo-prime states and L-function reference values.

The product logarithm is always accumulated as a sum of principal-branch
factor logs (never the log of the accumulated product), which keeps it
free of branch jumps; each factor satisfies |chi(p) p^-s| < 1 for
sigma > 0 and p >= 2, so the principal branch is unambiguous.

Reference values:

* ``zeta_reference`` implements Borwein's Chebyshev-accelerated
  alternating series for eta(s) = (1 - 2^(1-s)) zeta(s) in mpmath
  arithmetic, with working precision scaled to the exp(pi |t| / 2)
  conditioning loss.  Accurate to better than 1e-10 relative for
  |Im s| <= 200, the documented cap.

* ``dirichlet_l_reference`` sums the Dirichlet series directly over whole
  periods (block sums of a non-principal character vanish) and closes the
  tail with a binomial expansion in r/(jk) whose coefficients are Hurwitz
  zeta values at shifted exponents, all absolutely convergent for
  sigma > 0.05.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import mpmath as mp
import numpy as np

from .characters import DirichletCharacter, evaluate
from .errors import DomainError, InsufficientStateError, PoleError, WrongSeriesError
from .pseudoprimes import PseudoPrimeState, StateKind
from .series import cos_coefficients

#: zeta_reference refuses |Im s| beyond this rather than degrade silently.
ZETA_TIM_CAP = 200.0

_LN_BASE = math.log(3.0 + math.sqrt(8.0))  # Borwein per-term digit gain


@dataclass(frozen=True)
class ProductTrace:
    """Running log of a partial Euler product, one entry per factor."""

    pseudoprimes: np.ndarray      # the factors' primes, in ascending order
    partial_log: np.ndarray       # complex; partial_log[j] = sum of first j+1 factor logs
    n_factors: int


def factor_log(chi_value: complex, p: int, s: complex) -> complex:
    """-log(1 - chi(p) p^-s), principal branch."""
    return -np.log(1.0 - chi_value * np.exp(-s * np.log(complex(p))))


def log_euler_product(state: PseudoPrimeState, chi: DirichletCharacter,
                      s: complex, n_factors: int,
                      include_two: bool = False) -> ProductTrace:
    """Partial sums of -log(1 - chi(p'_n) p'_n^-s) over the first factors.

    ``include_two`` prepends the exact p = 2 factor; states never contain
    2, so this is only allowed for the actual-primes state, where it lets
    deterministic checks hit classical constants.
    """
    s = complex(s)
    if s.real <= 0:
        raise DomainError(f"need Re(s) > 0, got {s.real}")
    positions = np.flatnonzero(state.membership)
    if len(positions) < n_factors:
        raise InsufficientStateError(
            f"state holds {len(positions)} members, need {n_factors}")
    ps = positions[:n_factors].astype(np.int64)
    if include_two:
        if state.kind is not StateKind.ACTUAL_PRIMES:
            raise DomainError("include_two is only valid for actual primes")
        ps = np.concatenate(([2], ps))
    k = chi.modulus
    chi_vals = np.array([evaluate(chi, int(r) if r else k) for r in range(k)])
    w = chi_vals[ps % k] * np.exp(-s * np.log(ps.astype(np.float64)))
    logs = -np.log(1.0 - w)
    return ProductTrace(pseudoprimes=ps, partial_log=np.cumsum(logs),
                        n_factors=len(ps))


def angle_series_prefix(state: PseudoPrimeState, chi: DirichletCharacter,
                        n_terms: int) -> np.ndarray:
    """Prefix sums of the angle series, one value per pseudo-prime.

    Convergence diagnostic for the square-root growth of the series; the
    j-th entry is the series value after the j-th member (members at which
    chi vanishes contribute 0 but still advance the index).  The principal
    character is accepted here, where the prefix sums just count coprime
    members.
    """
    positions = np.flatnonzero(state.membership)
    if len(positions) < n_terms:
        raise InsufficientStateError(
            f"state holds {len(positions)} members, need {n_terms}")
    ps = positions[:n_terms]
    coef = cos_coefficients(chi, 0.0, int(ps[-1]) if n_terms else 3)
    return np.cumsum(coef[ps])


def _borwein_d(n: int) -> list[Fraction]:
    """Borwein d_k coefficients, exact."""
    d = []
    term = Fraction(1, n)  # (n-1)! / (n! 0!) = 1/n
    acc = term
    d.append(n * acc)
    for j in range(1, n + 1):
        term *= Fraction(4 * (n + j - 1) * (n - j + 1), (2 * j - 1) * (2 * j))
        acc += term
        d.append(n * acc)
    return d


def zeta_reference(s: complex) -> complex:
    """Riemann zeta in the strip via Borwein's alternating-series acceleration.

    Valid for Re(s) > 0, s != 1, |Im s| <= ZETA_TIM_CAP; relative accuracy
    better than 1e-10 across that range (verified against an independent
    high-precision evaluation in the tests).
    """
    s = complex(s)
    if s == 1:
        raise PoleError("zeta has a pole at s = 1")
    if s.real <= 0:
        raise DomainError(f"need Re(s) > 0, got {s.real}")
    tim = abs(s.imag)
    if tim > ZETA_TIM_CAP:
        raise DomainError(f"|Im s| = {tim} exceeds the accuracy cap {ZETA_TIM_CAP}")
    # digits lost to the eta->zeta conditioning: exp(pi t / 2) plus the
    # (1 + 2t) prefactor from Borwein's bound
    loss = math.pi * tim / (2.0 * math.log(10.0)) + math.log10(1.0 + 2.0 * tim)
    digits = 16 + loss
    with mp.workdps(int(digits) + 12):
        ms = mp.mpc(s)
        denom = 1 - mp.power(2, 1 - ms)
        if denom == 0:
            raise DomainError(
                "s is too close to a zero of 1 - 2^(1-s); cannot evaluate")
        denom_loss = max(0.0, -math.log10(abs(denom)))
        digits += denom_loss
    n = int(digits * math.log(10.0) / _LN_BASE) + 8
    d = _borwein_d(n)
    with mp.workdps(int(digits) + 12):
        ms = mp.mpc(s)
        dn = mp.mpf(d[n].numerator)  # d_k are integers
        acc = mp.mpc(0)
        sign = 1
        for kk in range(n):
            acc += sign * (mp.mpf(d[kk].numerator) - dn) * mp.power(kk + 1, -ms)
            sign = -sign
        eta = -acc / dn
        denom = 1 - mp.power(2, 1 - ms)
        return complex(eta / denom)


def zeta_truncated(s: complex, t_for_cutoff: float,
                   c_mult: float = 1.0) -> tuple[complex, complex]:
    """Truncated zeta Euler product with N(t) = max(ceil(c_mult t^2), 10) factors.

    Returns (product_log, residual) with residual = log zeta(s) - product_log;
    the residual's imaginary part is reduced to (-pi, pi] since the product
    log and the principal log of zeta may sit on different branches.
    """
    from .pseudoprimes import nth_prime_bound, primes_up_to

    s = complex(s)
    if s.real <= 0.5:
        raise DomainError(f"need Re(s) > 1/2, got {s.real}")
    if t_for_cutoff < 2:
        raise DomainError(f"need t_for_cutoff >= 2, got {t_for_cutoff}")
    n_t = max(math.ceil(c_mult * t_for_cutoff * t_for_cutoff), 10)
    primes = primes_up_to(nth_prime_bound(n_t))[:n_t].astype(np.float64)
    product_log = complex(np.sum(-np.log(1.0 - np.exp(-s * np.log(primes)))))
    log_zeta = complex(mp.log(mp.mpc(zeta_reference(s))))
    residual = log_zeta - product_log
    im = math.remainder(residual.imag, 2.0 * math.pi)
    return product_log, complex(residual.real, im)


def _char_value_mp(chi: DirichletCharacter, r: int):
    q = chi.values[r % chi.modulus]
    if q is None:
        return mp.mpc(0)
    return mp.expjpi(2 * mp.mpf(q.numerator) / q.denominator)


def dirichlet_l_reference(chi: DirichletCharacter, s: complex,
                          rel_tol: float = 1e-12) -> complex:
    """L(s, chi) for non-principal chi, sigma > 0.05.

    Whole periods of the series are summed directly for j < J blocks; the
    remaining tail sum_{j >= J} sum_r chi(r) (jk + r)^-s is expanded in
    powers of r/(jk).  The m = 0 term vanishes because the character sums
    to zero over a period, and each m >= 1 term is
    binom(-s, m) k^(-s-m) [sum_r chi(r) r^m] * sum_{j >= J} j^(-s-m),
    absolutely convergent since Re(s) + m > 1.
    """
    s = complex(s)
    if chi.principal:
        raise WrongSeriesError("principal characters have a pole structure; "
                               "use the truncated zeta path")
    if s.real <= 0.05:
        raise DomainError(f"need Re(s) > 0.05, got {s.real}")
    if abs(s.imag) > ZETA_TIM_CAP:
        raise DomainError(f"|Im s| exceeds the accuracy cap {ZETA_TIM_CAP}")
    k = chi.modulus
    blocks = max(64, math.ceil(2.0 * abs(s)))
    with mp.workdps(30):
        ms = mp.mpc(s)
        chi_mp = [_char_value_mp(chi, r) for r in range(k + 1)]
        direct = mp.mpc(0)
        for n in range(1, blocks * k + 1):
            if chi_mp[((n - 1) % k) + 1] != 0:
                direct += chi_mp[((n - 1) % k) + 1] * mp.power(n, -ms)
        tail = mp.mpc(0)
        binom = mp.mpc(1)
        eps = mp.mpf(10) ** (-mp.mp.dps + 3)
        for m in range(1, 200):
            binom *= (-ms - (m - 1)) / m
            t_m = mp.fsum(chi_mp[r] * mp.power(r, m) for r in range(1, k + 1))
            term = binom * mp.power(k, -ms - m) * t_m * mp.zeta(ms + m, blocks)
            tail += term
            if abs(term) < eps * max(abs(direct + tail), mp.mpf(1e-30)) and m > 3:
                break
        return complex(direct + tail)


def write_trace_csv(trace: ProductTrace, path) -> None:
    """Convergence trace export: n, p_n, re_log, im_log."""
    with open(path, "w", encoding="utf-8") as f:
        f.write("n,p_n,re_log,im_log\n")
        for i in range(trace.n_factors):
            v = trace.partial_log[i]
            f.write(f"{i + 1},{trace.pseudoprimes[i]},{v.real:.12g},{v.imag:.12g}\n")
