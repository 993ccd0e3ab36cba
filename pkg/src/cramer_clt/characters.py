"""Dirichlet characters mod k as exact rational-angle tables.

A character is stored as a length-k table of angles: entry r holds the
fraction q in [0, 1) with chi(n) = exp(2*pi*i*q) for n == r (mod k), or
None where gcd(n, k) > 1 (entry 0 stands for n == k).  Keeping angles as
``fractions.Fraction`` makes multiplicativity and orthogonality exactly
testable; conversion to floating point happens only at evaluation.

The canonical enumeration decomposes (Z/kZ)* into cyclic factors: the
two-generator structure (-1, 5) for the 2-part, and the least primitive
root for each odd prime-power factor (factors ordered by prime).  The
characters are then enumerated lexicographically over generator exponents,
so index 0 is always the principal character and indices are stable across
runs and platforms.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Optional

from .errors import DomainError

#: Name of the built-in modulus-7 reference character used by the figure runs.
BUILTIN_CHI7 = "paper-chi7"

# chi(1..7) angles of the built-in character: 1, e^{2pi i/3}, e^{pi i/3},
# e^{-2pi i/3}, e^{-pi i/3}, -1, 0 -- stored with table index n mod 7.
_CHI7_VALUES = (
    None,
    Fraction(0),
    Fraction(1, 3),
    Fraction(1, 6),
    Fraction(2, 3),
    Fraction(5, 6),
    Fraction(1, 2),
)

_HALF = Fraction(1, 2)


@dataclass(frozen=True)
class DirichletCharacter:
    """Immutable character table; safe to share across threads."""

    modulus: int
    values: tuple  # tuple[Optional[Fraction], ...], length modulus
    principal: bool
    a_factor: Fraction  # 1 if the character is real (+-1 valued), else 1/2
    index: Optional[int] = None
    name: Optional[str] = None

    def conjugate(self) -> "DirichletCharacter":
        vals = tuple(None if q is None else (-q) % 1 for q in self.values)
        return DirichletCharacter(self.modulus, vals, self.principal,
                                  self.a_factor, index=None, name=None)

    def is_real(self) -> bool:
        return self.a_factor == 1


def totient(k: int) -> int:
    """Euler totient: count of 1 <= n <= k coprime to k."""
    if k < 1:
        raise DomainError(f"totient requires k >= 1, got {k}")
    phi, m = 1, k
    p = 2
    while p * p <= m:
        if m % p == 0:
            pe = 1
            while m % p == 0:
                m //= p
                pe *= p
            phi *= pe - pe // p
        p += 1 if p == 2 else 2
    if m > 1:
        phi *= m - 1
    return phi


def _factorize(k: int) -> list[tuple[int, int]]:
    out = []
    m, p = k, 2
    while p * p <= m:
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            out.append((p, e))
        p += 1 if p == 2 else 2
    if m > 1:
        out.append((m, 1))
    return out


def _least_primitive_root(q: int, phi_q: int) -> int:
    prime_divs = [p for p, _ in _factorize(phi_q)]
    for g in range(2, q):
        if math.gcd(g, q) != 1:
            continue
        if all(pow(g, phi_q // p, q) != 1 for p in prime_divs):
            return g
    raise DomainError(f"no primitive root mod {q}")  # unreachable for prime powers


def _unit_group_generators(k: int) -> list[tuple[int, int]]:
    """Generators (g_i, order_i) of (Z/kZ)* lifted to modulus k via CRT."""
    gens: list[tuple[int, int]] = []
    for p, e in _factorize(k):
        q = p**e
        cofactor = k // q
        if p == 2:
            if e == 1:
                continue  # trivial factor
            local = [(q - 1, 2)]  # -1 mod 2^e
            if e >= 3:
                local.append((5, q // 4))
        else:
            phi_q = q - q // p
            local = [(_least_primitive_root(q, phi_q), phi_q)]
        for g, order in local:
            if cofactor == 1:
                gens.append((g % k, order))
            else:
                # CRT lift: == g (mod q), == 1 (mod k/q)
                inv = pow(q % cofactor, -1, cofactor) if cofactor > 1 else 0
                lifted = (g + q * ((1 - g) * inv % cofactor)) % k
                gens.append((lifted, order))
    return gens


def _discrete_log_table(k: int, gens: list[tuple[int, int]]) -> dict[int, tuple[int, ...]]:
    table: dict[int, tuple[int, ...]] = {}
    orders = [s for _, s in gens]
    for exps in product(*(range(s) for s in orders)):
        r = 1
        for (g, _), a in zip(gens, exps):
            r = (r * pow(g, a, k)) % k
        table[r] = exps
    return table


def _a_factor(values: tuple) -> Fraction:
    real = all(q in (0, _HALF) for q in values if q is not None)
    return Fraction(1) if real else _HALF


def character_table(k: int) -> list[DirichletCharacter]:
    """All phi(k) characters mod k in canonical order (principal first)."""
    if k < 1:
        raise DomainError(f"character_table requires k >= 1, got {k}")
    if k == 1:
        return [DirichletCharacter(1, (Fraction(0),), True, Fraction(1), index=0)]
    gens = _unit_group_generators(k)
    orders = [s for _, s in gens]
    dlog = _discrete_log_table(k, gens)
    chars = []
    for idx, exps in enumerate(product(*(range(s) for s in orders))):
        values: list[Optional[Fraction]] = [None] * k
        for r, a in dlog.items():
            q = sum(Fraction(j * ai, s) for j, ai, s in zip(exps, a, orders)) % 1
            values[r % k] = q
        vals = tuple(values)
        principal = all(j == 0 for j in exps)
        chars.append(DirichletCharacter(k, vals, principal, _a_factor(vals), index=idx))
    return chars


def principal_character(k: int) -> DirichletCharacter:
    return character_table(k)[0]


def builtin_character(name: str) -> DirichletCharacter:
    """Resolve a named built-in character to its canonical-order instance."""
    if name != BUILTIN_CHI7:
        raise DomainError(f"unknown builtin character {name!r}")
    for chi in character_table(7):
        if chi.values == _CHI7_VALUES:
            return DirichletCharacter(chi.modulus, chi.values, chi.principal,
                                      chi.a_factor, index=chi.index, name=name)
    raise DomainError("builtin character table mismatch")  # pragma: no cover


def angle(chi: DirichletCharacter, n: int) -> Optional[Fraction]:
    """Exact angle q with chi(n) = exp(2*pi*i*q), or None when chi(n) = 0."""
    if n < 1:
        raise DomainError(f"character argument must be >= 1, got {n}")
    return chi.values[n % chi.modulus]


def evaluate(chi: DirichletCharacter, n: int) -> complex:
    """chi(n) as a complex number on the unit circle, or 0."""
    q = angle(chi, n)
    if q is None:
        return 0j
    return cmath.exp(2j * math.pi * float(q))


def validate_character_table(chi: DirichletCharacter) -> None:
    """Check all type invariants; raises DomainError on the first violation.

    Used when a character is supplied explicitly (config file) rather than
    constructed by ``character_table``.
    """
    k = chi.modulus
    if k < 1 or len(chi.values) != k:
        raise DomainError("character table length must equal the modulus")
    nonzero = 0
    for r, q in enumerate(chi.values):
        n = r if r != 0 else k
        coprime = math.gcd(n, k) == 1
        if coprime != (q is not None):
            raise DomainError(f"zero pattern violated at n={n} (mod {k})")
        if q is not None:
            if not isinstance(q, Fraction) or not (0 <= q < 1):
                raise DomainError(f"angle at n={n} must be a Fraction in [0,1)")
            nonzero += 1
    if nonzero != totient(k):
        raise DomainError("non-zero entry count differs from totient(k)")
    for m in range(1, k + 1):
        qm = chi.values[m % k]
        if qm is None:
            continue
        for n in range(1, k + 1):
            qn = chi.values[n % k]
            if qn is None:
                continue
            qmn = chi.values[(m * n) % k]
            if qmn is None or (qm + qn) % 1 != qmn:
                raise DomainError(f"multiplicativity violated at ({m},{n}) mod {k}")
    if chi.principal != all(q == 0 for q in chi.values if q is not None):
        raise DomainError("principal flag inconsistent with table")
    if not chi.principal:
        total = sum(evaluate(chi, n) for n in range(1, k + 1))
        if abs(total.real) > 1e-12 or abs(total.imag) > 1e-12:
            raise DomainError("non-principal character does not sum to zero")
    if chi.a_factor != _a_factor(chi.values):
        raise DomainError("a_factor inconsistent with table")


def character_from_angles(k: int, entries: list) -> DirichletCharacter:
    """Build and validate a character from chi(1..k) angle entries.

    Each entry is a Fraction (angle in turns) or None for chi(n) = 0; the
    last entry corresponds to n = k.
    """
    if k < 1 or len(entries) != k:
        raise DomainError("need exactly k entries for chi(1..k)")
    values: list[Optional[Fraction]] = [None] * k
    for i, q in enumerate(entries, start=1):
        values[i % k] = None if q is None else Fraction(q) % 1
    vals = tuple(values)
    principal = all(q == 0 for q in vals if q is not None)
    chi = DirichletCharacter(k, vals, principal, _a_factor(vals))
    validate_character_table(chi)
    return chi
