"""Counter-based random number generation.

Every draw in this package is a pure function of ``(seed, counter)``:

    u64(seed, n) = f(f(seed XOR GOLDEN) XOR n * GOLDEN)

where ``f`` is the SplitMix64 finalizer (Steele, Lea & Flood's avalanching
bijection on 64-bit words) and GOLDEN is the 64-bit golden-ratio constant.
Uniform variates take the top 53 bits, giving values on a 2^-53 grid in
[0, 1).  Because there is no sequential state, draws for different counters
can be generated in any order, in any number of threads, and always
reproduce bit-for-bit.

Per-state substreams are derived the same way: ``substream_seed(master, i)``
is itself a 64-bit draw, so ensembles indexed by state number are fully
determined by one master seed.
"""

from __future__ import annotations

import numpy as np

_MASK = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_MULT1 = 0xBF58476D1CE4E5B9
_MULT2 = 0x94D049BB133111EB

_U_GOLDEN = np.uint64(_GOLDEN)
_U_MULT1 = np.uint64(_MULT1)
_U_MULT2 = np.uint64(_MULT2)
_INV_2_53 = 2.0 ** -53


def mix64(x: int) -> int:
    """SplitMix64 finalizer on a Python int, reduced mod 2^64."""
    x &= _MASK
    x = ((x ^ (x >> 30)) * _MULT1) & _MASK
    x = ((x ^ (x >> 27)) * _MULT2) & _MASK
    return x ^ (x >> 31)


def _mix64_array(x: np.ndarray) -> np.ndarray:
    x = np.bitwise_xor(x, np.right_shift(x, np.uint64(30)))
    x = np.multiply(x, _U_MULT1)
    x = np.bitwise_xor(x, np.right_shift(x, np.uint64(27)))
    x = np.multiply(x, _U_MULT2)
    return np.bitwise_xor(x, np.right_shift(x, np.uint64(31)))


def stream_key(seed: int) -> int:
    """Mixed 64-bit key for a seed; the per-draw counter is folded into it."""
    return mix64((seed & _MASK) ^ _GOLDEN)


def draw_u64(seed: int, counter: int) -> int:
    """The raw 64-bit draw for (seed, counter)."""
    return mix64(stream_key(seed) ^ ((counter * _GOLDEN) & _MASK))


def uniform(seed: int, counter: int) -> float:
    """Uniform variate on [0, 1) for (seed, counter)."""
    return (draw_u64(seed, counter) >> 11) * _INV_2_53


def uniform_block(seed: int, lo: int, hi: int) -> np.ndarray:
    """Uniform variates for counters lo..hi inclusive, as a float64 array.

    Identical values to ``uniform(seed, n)`` for each n, computed
    vectorized.
    """
    if hi < lo:
        return np.empty(0, dtype=np.float64)
    key = np.uint64(stream_key(seed))
    counters = np.arange(lo, hi + 1, dtype=np.uint64)
    with np.errstate(over="ignore"):
        ctr = np.multiply(counters, _U_GOLDEN)
        u64 = _mix64_array(np.bitwise_xor(ctr, key))
    return (u64 >> np.uint64(11)).astype(np.float64) * _INV_2_53


def substream_seed(master_seed: int, index: int) -> int:
    """Seed for the index-th substream of a master seed (e.g. one ensemble state)."""
    return draw_u64(master_seed, index)
