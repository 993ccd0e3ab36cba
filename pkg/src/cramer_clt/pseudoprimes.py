"""Pseudo-prime states: Cramer-model sampling, windowed resampling, sieving.

A state is a membership bitmap over the integers 3..X.  Integer 2 is never
a member: its inclusion probability 1/log 2 would exceed 1.  In the Cramer
model each n >= 3 joins independently with probability 1/log n, using one
counter-based draw per integer, so a state is a pure function of
(kind, seed, modulus, filtered flag, cutoff) and can be regenerated
bit-for-bit at any cutoff.
"""

from __future__ import annotations

import binascii
import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import DomainError, InsufficientStateError
from .rng import uniform, uniform_block


class StateKind(str, Enum):
    CRAMER = "cramer"
    GROSSWALD_SCHNITZER = "grosswald-schnitzer"
    ACTUAL_PRIMES = "actual-primes"


@dataclass(frozen=True)
class EnsembleSpec:
    """How states are drawn.

    ``coprime_filtered`` selects the modulus-aware sampler that suppresses
    n with gcd(n, k) > 1 at generation time; the default leaves filtering
    to the series evaluation, which is what the two-stage construction of
    the main experiments requires.
    """

    kind: StateKind = StateKind.CRAMER
    modulus: int = 1
    coprime_filtered: bool = False
    gs_window: int = 0

    def __post_init__(self):
        if self.modulus < 1:
            raise DomainError(f"modulus must be >= 1, got {self.modulus}")
        if self.gs_window < 0:
            raise DomainError(f"gs window must be >= 0, got {self.gs_window}")


@dataclass(eq=False)
class PseudoPrimeState:
    """One sampled state: immutable after construction."""

    kind: StateKind
    seed: int
    modulus: int
    cutoff: int
    membership: np.ndarray  # bool, length cutoff + 1, index = integer
    coprime_filtered: bool = False
    gs_window: int = 0
    clamp_events: int = 0

    def count(self) -> int:
        return int(np.count_nonzero(self.membership))


def sample_cramer(spec: EnsembleSpec, seed: int, cutoff: int) -> PseudoPrimeState:
    """Draw one Cramer-model state up to ``cutoff`` inclusive."""
    if cutoff < 3:
        raise DomainError(f"cutoff must be >= 3, got {cutoff}")
    n = np.arange(3, cutoff + 1)
    u = uniform_block(seed, 3, cutoff)
    z = u <= 1.0 / np.log(n)
    if spec.coprime_filtered and spec.modulus > 1:
        z &= np.gcd(n, spec.modulus) == 1
    membership = np.zeros(cutoff + 1, dtype=bool)
    membership[3:] = z
    return PseudoPrimeState(StateKind.CRAMER, seed, spec.modulus, cutoff,
                            membership, coprime_filtered=spec.coprime_filtered)


def suggested_cutoff(n_terms: int) -> int:
    """Initial cutoff for a target member count: 1.25 * N log N with a floor."""
    return max(30, math.ceil(1.25 * n_terms * math.log(max(n_terms, 3))))


def sample_cramer_for_count(spec: EnsembleSpec, seed: int, n_terms: int,
                            max_grow: int = 10) -> PseudoPrimeState:
    """Sample a state holding at least ``n_terms`` members.

    Starts at ``suggested_cutoff`` and grows the cutoff by 1.5x on
    shortfall; regrowth re-derives the same bits for the overlap, so the
    result is independent of the growth path.
    """
    cutoff = suggested_cutoff(n_terms)
    for _ in range(max_grow):
        state = sample_cramer(spec, seed, cutoff)
        if state.count() >= n_terms:
            return state
        cutoff = math.ceil(1.5 * cutoff)
    raise InsufficientStateError(
        f"could not reach {n_terms} members at cutoff {cutoff}")


def sieve_actual(cutoff: int) -> PseudoPrimeState:
    """The actual primes in [3, cutoff] as a state (2 excluded, as always)."""
    if cutoff < 3:
        raise DomainError(f"cutoff must be >= 3, got {cutoff}")
    membership = _prime_mask(cutoff)
    membership[2] = False
    return PseudoPrimeState(StateKind.ACTUAL_PRIMES, 0, 1, cutoff, membership)


def _prime_mask(cutoff: int) -> np.ndarray:
    mask = np.ones(cutoff + 1, dtype=bool)
    mask[:2] = False
    for p in range(2, math.isqrt(cutoff) + 1):
        if mask[p]:
            mask[p * p :: p] = False
    return mask


def primes_up_to(cutoff: int) -> np.ndarray:
    """All primes <= cutoff including 2 (int64 array)."""
    if cutoff < 2:
        return np.empty(0, dtype=np.int64)
    return np.flatnonzero(_prime_mask(cutoff)).astype(np.int64)


def nth_prime_bound(n: int) -> int:
    """Upper bound for the n-th prime, safe for sieving."""
    if n < 6:
        return 15
    x = n * (math.log(n) + math.log(math.log(n)))
    return int(x) + 10


def sample_gs(primes: PseudoPrimeState, window: int, modulus: int,
              seed: int, n_terms: int | None = None) -> PseudoPrimeState:
    """Windowed resampling: p'_n uniform on {p_n + j*k : 0 <= j*k <= window}.

    Sampling runs left to right; candidates <= p'_{n-1} are excluded so the
    result stays strictly increasing.  If the restriction empties the
    candidate set (impossible for a shared window/modulus, but kept as a
    guard) the largest candidate is taken and counted as a clamp event.
    """
    if primes.kind is not StateKind.ACTUAL_PRIMES:
        raise DomainError("windowed resampling needs an actual-primes state")
    if window < 0:
        raise DomainError(f"window must be >= 0, got {window}")
    if modulus < 1:
        raise DomainError(f"modulus must be >= 1, got {modulus}")
    base = np.flatnonzero(primes.membership)
    if n_terms is not None:
        if len(base) < n_terms:
            raise InsufficientStateError(
                f"state holds {len(base)} primes, need {n_terms}")
        base = base[:n_terms]
    jmax = window // modulus
    cutoff = int(base[-1]) + jmax * modulus if len(base) else primes.cutoff
    membership = np.zeros(cutoff + 1, dtype=bool)
    clamps = 0
    prev = 0
    for idx, p in enumerate(base.tolist(), start=1):
        j_lo = 0
        if p <= prev:
            j_lo = (prev - p) // modulus + 1
        if j_lo > jmax:
            choice = p + jmax * modulus
            clamps += 1
        else:
            m = jmax - j_lo + 1
            j = j_lo + min(int(uniform(seed, idx) * m), m - 1)
            choice = p + j * modulus
        membership[choice] = True
        prev = choice
    return PseudoPrimeState(StateKind.GROSSWALD_SCHNITZER, seed, modulus,
                            cutoff, membership, gs_window=window,
                            clamp_events=clamps)


def pi_count(state: PseudoPrimeState, x: float) -> int:
    """Number of members <= x."""
    if x > state.cutoff:
        raise DomainError(f"x={x} exceeds state cutoff {state.cutoff}")
    if x < 3:
        raise DomainError(f"x must be >= 3, got {x}")
    return int(np.count_nonzero(state.membership[: int(x) + 1]))


def expected_pi(x: float) -> float:
    """Expected member count sum_{n=3}^{floor(x)} 1/log n (exact sum)."""
    if x < 3:
        raise DomainError(f"x must be >= 3, got {x}")
    n = np.arange(3, int(x) + 1)
    return float(np.sum(1.0 / np.log(n)))


def nth_pseudoprime(state: PseudoPrimeState, n: int) -> int:
    """Value of the n-th member in increasing order (1-based)."""
    if n < 1:
        raise DomainError(f"index must be >= 1, got {n}")
    positions = np.flatnonzero(state.membership)
    if len(positions) < n:
        raise InsufficientStateError(
            f"state holds {len(positions)} members, need {n}")
    return int(positions[n - 1])


def dump_state(state: PseudoPrimeState) -> str:
    """Debug dump: header line then the hex-encoded bitmap."""
    header = f"{state.kind.value},{state.seed},{state.modulus},{state.cutoff}"
    packed = np.packbits(state.membership)
    return header + "\n" + binascii.hexlify(packed.tobytes()).decode()


def parse_state(text: str) -> PseudoPrimeState:
    header, hexbits = text.strip().split("\n", 1)
    kind_s, seed_s, modulus_s, cutoff_s = header.split(",")
    cutoff = int(cutoff_s)
    raw = np.frombuffer(binascii.unhexlify(hexbits.strip()), dtype=np.uint8)
    membership = np.unpackbits(raw)[: cutoff + 1].astype(bool)
    return PseudoPrimeState(StateKind(kind_s), int(seed_s), int(modulus_s),
                            cutoff, membership)
