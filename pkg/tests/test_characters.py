"""Character construction and algebra, checked against brute-force oracles."""

import math
from fractions import Fraction

import numpy as np
import pytest

from cramer_clt import (
    DomainError,
    angle,
    builtin_character,
    character_table,
    evaluate,
    principal_character,
    totient,
)
from cramer_clt.characters import character_from_angles, validate_character_table


def _totient_brute(k: int) -> int:
    return sum(1 for n in range(1, k + 1) if math.gcd(n, k) == 1)


def test_totient_examples():
    assert totient(7) == 6
    assert totient(1) == 1
    assert totient(12) == _totient_brute(12) == 4


def test_totient_matches_brute_force():
    for k in range(1, 101):
        assert totient(k) == _totient_brute(k)


def test_totient_domain():
    with pytest.raises(DomainError):
        totient(0)


def test_modulus_one_trivial_character():
    (chi,) = character_table(1)
    assert chi.principal and chi.a_factor == 1
    for n in (1, 2, 17, 10**6):
        assert evaluate(chi, n) == 1


def test_modulus_two_single_principal():
    chars = character_table(2)
    assert len(chars) == 1 and chars[0].principal
    assert evaluate(chars[0], 2) == 0
    assert evaluate(chars[0], 3) == 1


def test_modulus_three_matches_enumeration():
    # (Z/3Z)* = {1, 2} with 2^2 = 1: multiplicative maps have f(2) = +-1
    chars = character_table(3)
    assert len(chars) == 2
    tables = {tuple(c.values) for c in chars}
    principal = (None, Fraction(0), Fraction(0))
    real = (None, Fraction(0), Fraction(1, 2))
    assert tables == {principal, real}


def test_builtin_chi7_table_exact():
    chi = builtin_character("paper-chi7")
    assert chi.modulus == 7 and chi.a_factor == Fraction(1, 2)
    expected = {1: Fraction(0), 2: Fraction(1, 3), 3: Fraction(1, 6),
                4: Fraction(2, 3), 5: Fraction(5, 6), 6: Fraction(1, 2)}
    for n, q in expected.items():
        assert angle(chi, n) == q
    assert angle(chi, 7) is None
    # the builtin must be one of the canonical characters
    assert chi.values == character_table(7)[chi.index].values


def test_chi7_evaluate_examples(chi7):
    assert evaluate(chi7, 6) == pytest.approx(-1, abs=1e-15)
    assert evaluate(chi7, 7) == 0
    assert evaluate(chi7, 13) == pytest.approx(evaluate(chi7, 6), abs=1e-15)


def test_chi7_angle_examples(chi7):
    assert angle(chi7, 2) == Fraction(1, 3)
    assert angle(chi7, 1) == 0
    assert angle(chi7, 5) == Fraction(5, 6)


def test_angle_domain(chi7):
    with pytest.raises(DomainError):
        angle(chi7, 0)
    with pytest.raises(DomainError):
        evaluate(chi7, -3)


@pytest.mark.parametrize("k", list(range(1, 51)))
def test_character_algebra(k):
    chars = character_table(k)
    phi = totient(k)
    assert len(chars) == phi
    assert sum(1 for c in chars if c.principal) == 1
    assert len({tuple(c.values) for c in chars}) == phi

    for chi in chars:
        nonzero = sum(1 for q in chi.values if q is not None)
        assert nonzero == phi
        for n in range(1, k + 1):
            expected_zero = math.gcd(n, k) > 1
            assert (angle(chi, n) is None) == expected_zero
        # exact multiplicativity on the angle table
        for m in range(1, k + 1):
            qm = angle(chi, m)
            if qm is None:
                continue
            for n in range(1, k + 1):
                qn = angle(chi, n)
                if qn is None:
                    continue
                assert angle(chi, m * n) == (qm + qn) % 1
        if not chi.principal:
            total = sum(evaluate(chi, n) for n in range(1, k + 1))
            assert abs(total.real) < 1e-12 and abs(total.imag) < 1e-12
        # real characters: exact integer cancellation
        if not chi.principal and chi.a_factor == 1:
            ints = sum(1 if q == 0 else -1 for q in chi.values if q is not None)
            assert ints == 0


def test_a_factor_iff_self_conjugate():
    for k in (3, 4, 5, 7, 8, 12, 15, 16, 21, 24, 35, 40):
        for chi in character_table(k):
            self_conj = chi.values == chi.conjugate().values
            assert (chi.a_factor == 1) == self_conj


def test_evaluate_multiplicative_large_arguments(chi7):
    rng = np.random.default_rng(5)
    for _ in range(200):
        m = int(rng.integers(1, 10**6))
        n = int(rng.integers(1, 10**6))
        lhs = evaluate(chi7, m * n)
        rhs = evaluate(chi7, m) * evaluate(chi7, n)
        assert abs(lhs - rhs) < 1e-12


def test_canonical_order_stable():
    # principal character first, and indices match list positions
    for k in (7, 12, 45):
        chars = character_table(k)
        assert chars[0].principal
        assert [c.index for c in chars] == list(range(len(chars)))


def test_character_from_angles_accepts_chi7(chi7):
    entries = [angle(chi7, n) for n in range(1, 8)]
    rebuilt = character_from_angles(7, entries)
    assert rebuilt.values == chi7.values
    assert rebuilt.a_factor == chi7.a_factor


def test_character_from_angles_rejects_bad_tables():
    good = [Fraction(0), Fraction(1, 3), Fraction(1, 6), Fraction(2, 3),
            Fraction(5, 6), Fraction(1, 2), None]
    # break multiplicativity
    bad = list(good)
    bad[1] = Fraction(1, 6)
    with pytest.raises(DomainError):
        character_from_angles(7, bad)
    # break the zero pattern
    bad = list(good)
    bad[6] = Fraction(0)
    with pytest.raises(DomainError):
        character_from_angles(7, bad)


def test_validate_rejects_wrong_a_factor(chi7):
    from cramer_clt.characters import DirichletCharacter

    broken = DirichletCharacter(chi7.modulus, chi7.values, chi7.principal,
                                Fraction(1))
    with pytest.raises(DomainError):
        validate_character_table(broken)


def test_principal_character_shortcut():
    for k in (1, 2, 6, 7):
        chi = principal_character(k)
        assert chi.principal and chi.index == 0
