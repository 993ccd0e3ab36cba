"""Sampling, sieving, counting: determinism and distributional checks."""

import math

import numpy as np
import pytest

from cramer_clt import (
    DomainError,
    EnsembleSpec,
    InsufficientStateError,
    StateKind,
    expected_pi,
    nth_pseudoprime,
    pi_count,
    sample_cramer,
    sample_cramer_for_count,
    sample_gs,
    sieve_actual,
)
from cramer_clt.pseudoprimes import (
    dump_state,
    nth_prime_bound,
    parse_state,
    primes_up_to,
    suggested_cutoff,
)
from cramer_clt.rng import substream_seed, uniform

SPEC = EnsembleSpec()


def test_cramer_determinism():
    a = sample_cramer(SPEC, 123, 5000)
    b = sample_cramer(SPEC, 123, 5000)
    assert np.array_equal(a.membership, b.membership)
    assert not np.array_equal(a.membership, sample_cramer(SPEC, 124, 5000).membership)


def test_cramer_excludes_small_integers():
    state = sample_cramer(SPEC, 9, 10_000)
    assert not state.membership[:3].any()


def test_cramer_growth_consistency():
    small = sample_cramer(SPEC, 55, 4000)
    large = sample_cramer(SPEC, 55, 6000)
    assert np.array_equal(small.membership, large.membership[:4001])


def test_bit3_probability_matches_rate():
    # Pr[bit 3] = 1/ln 3; frequency over 10^5 seeds within 3 standard errors
    p = 1.0 / math.log(3.0)
    n = 100_000
    hits = sum(uniform(seed, 3) <= p for seed in range(n))
    se = math.sqrt(p * (1 - p) / n)
    assert abs(hits / n - p) <= 3 * se


def test_filtered_sampler_respects_modulus():
    spec = EnsembleSpec(modulus=6, coprime_filtered=True)
    state = sample_cramer(spec, 2, 500)
    members = np.flatnonzero(state.membership)
    assert len(members) > 0
    assert all(math.gcd(int(n), 6) == 1 for n in members)


def test_unfiltered_sampler_ignores_modulus():
    spec = EnsembleSpec(modulus=6, coprime_filtered=False)
    state = sample_cramer(spec, 2, 500)
    members = np.flatnonzero(state.membership)
    assert any(math.gcd(int(n), 6) > 1 for n in members)


def test_pairwise_independence():
    # empirical correlation of (z_m, z_n) over 10^4 seeds within 3 SE of 0
    n_seeds = 10_000
    for m, n in ((3, 4), (10, 11), (100, 1000)):
        pm, pn = 1 / math.log(m), 1 / math.log(n)
        zm = np.array([uniform(s, m) <= pm for s in range(n_seeds)], dtype=float)
        zn = np.array([uniform(s, n) <= pn for s in range(n_seeds)], dtype=float)
        corr = np.corrcoef(zm, zn)[0, 1]
        assert abs(corr) <= 3.0 / math.sqrt(n_seeds)


def test_sieve_small():
    state = sieve_actual(10)
    assert list(np.flatnonzero(state.membership)) == [3, 5, 7]
    assert state.kind is StateKind.ACTUAL_PRIMES


def test_sieve_pi_1e5():
    # pi(10^5) = 9592 primes, minus the excluded 2
    state = sieve_actual(100_000)
    assert state.count() == 9591
    assert len(primes_up_to(100_000)) == 9592


def test_nth_prime_5000():
    state = sieve_actual(50_000)
    # 2 is excluded, so the 4999th member is the 5000th prime overall
    assert nth_pseudoprime(state, 4999) == 48611
    assert nth_pseudoprime(state, 5000) == 48619


def test_pi_count_examples():
    state = sieve_actual(10)
    assert pi_count(state, 10) == 3
    big = sieve_actual(200)
    assert pi_count(big, 100) == 24  # 25 primes up to 100, minus 2
    handmade = sample_cramer(SPEC, 1, 100)
    xs = np.arange(3, 101)
    counts = [pi_count(handmade, int(x)) for x in xs]
    assert all(b >= a for a, b in zip(counts, counts[1:]))


def test_pi_count_domain():
    state = sieve_actual(100)
    with pytest.raises(DomainError):
        pi_count(state, 101)
    with pytest.raises(DomainError):
        pi_count(state, 2)


def test_expected_pi_examples():
    assert expected_pi(3) == pytest.approx(1 / math.log(3), rel=1e-15)
    loop = sum(1 / math.log(n) for n in range(3, 101))
    assert expected_pi(100) == pytest.approx(loop, abs=1e-12)
    with pytest.raises(DomainError):
        expected_pi(2.5)


def test_expected_pi_close_to_li():
    from scipy import integrate

    li, _ = integrate.quad(lambda u: 1 / math.log(u), 2, 1e5, limit=200)
    assert abs(expected_pi(1e5) - li) / li < 0.03


def test_counting_law_reduced():
    # reduced version of the ensemble counting check (full run in acceptance)
    n_states = 300
    counts = np.array([sample_cramer(SPEC, substream_seed(4, i), 100_000).count()
                       for i in range(n_states)])
    expect = expected_pi(100_000)
    se = math.sqrt(expect / n_states)
    assert abs(counts.mean() - expect) <= 3 * se


def test_nth_pseudoprime_examples():
    state = sieve_actual(10)
    assert nth_pseudoprime(state, 2) == 5
    with pytest.raises(InsufficientStateError):
        nth_pseudoprime(state, 4)
    with pytest.raises(DomainError):
        nth_pseudoprime(state, 0)


def test_nth_pseudoprime_median_scale():
    # median position of the 5000th member sits ~13% above 5000 ln 5000
    # (the classical N log N understates by (loglogN - 1)/logN)
    n_states = 120
    nominal = 5000 * math.log(5000)
    meds = [nth_pseudoprime(sample_cramer_for_count(SPEC, substream_seed(8, i), 5000), 5000)
            for i in range(n_states)]
    ratio = float(np.median(meds)) / nominal
    assert 1.0 < ratio < 1.2


def test_sample_for_count_reaches_target():
    state = sample_cramer_for_count(SPEC, 3, 500)
    assert state.count() >= 500
    assert state.cutoff >= suggested_cutoff(500)


def test_gs_window_zero_is_identity():
    base = sieve_actual(1000)
    st = sample_gs(base, 0, 7, seed=1)
    assert np.array_equal(np.flatnonzero(st.membership),
                          np.flatnonzero(base.membership))


def test_gs_constraints_window7_mod7():
    base = sieve_actual(nth_prime_bound(300))
    base_primes = np.flatnonzero(base.membership)[:300]
    for seed in range(30):
        st = sample_gs(base, 7, 7, seed, n_terms=300)
        chosen = np.flatnonzero(st.membership)
        assert len(chosen) == 300
        assert np.all(chosen >= base_primes)
        assert np.all(chosen <= base_primes + 7)
        assert np.all((chosen - base_primes) % 7 == 0)
        assert np.all(np.diff(chosen) > 0)
        assert st.clamp_events == 0


def test_gs_two_prime_enumeration():
    # primes (3,5), window 2, modulus 1: supports exactly the ordered pairs
    base = sieve_actual(5)
    seen = set()
    for seed in range(3000):
        st = sample_gs(base, 2, 1, seed)
        a, b = (int(v) for v in np.flatnonzero(st.membership))
        assert a in (3, 4, 5) and b in (5, 6, 7) and a < b
        seen.add((a, b))
    expected = {(a, b) for a in (3, 4, 5) for b in (5, 6, 7) if a < b}
    assert seen == expected


def test_gs_determinism_and_kind():
    base = sieve_actual(1000)
    a = sample_gs(base, 10, 3, 77)
    b = sample_gs(base, 10, 3, 77)
    assert np.array_equal(a.membership, b.membership)
    assert a.kind is StateKind.GROSSWALD_SCHNITZER


def test_dump_parse_roundtrip():
    state = sample_cramer(SPEC, 42, 777)
    text = dump_state(state)
    header = text.splitlines()[0]
    assert header == "cramer,42,1,777"
    back = parse_state(text)
    assert np.array_equal(back.membership, state.membership)
    assert back.cutoff == state.cutoff and back.seed == state.seed


def test_domain_errors():
    with pytest.raises(DomainError):
        sample_cramer(SPEC, 1, 2)
    with pytest.raises(DomainError):
        sieve_actual(2)
    with pytest.raises(DomainError):
        EnsembleSpec(modulus=0)
    with pytest.raises(DomainError):
        EnsembleSpec(gs_window=-1)
