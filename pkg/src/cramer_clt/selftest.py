"""Scaled-down self-checks for the CLI: fast, deterministic, exit 4 on failure.

These mirror the full acceptance suite at reduced ensemble sizes with
correspondingly looser statistical thresholds; the deterministic checks
(character algebra, Ei integrals, Euler products, reference statistics)
run at full strength.
"""

from __future__ import annotations

import math

import numpy as np
from scipy import integrate

from .characters import builtin_character, character_table, evaluate, totient
from .config import RunConfig
from .ensemble import make_angle_ensemble, make_oscillatory_ensemble, run_parallel
from .eulerprod import dirichlet_l_reference, log_euler_product, zeta_reference
from .pseudoprimes import (
    EnsembleSpec,
    expected_pi,
    nth_prime_bound,
    sample_cramer,
    sample_gs,
    sieve_actual,
)
from .rng import substream_seed
from .series import ei_cos_integral, lyapunov_ratio
from .stats import fit_normal, ks_test
from .cli import actual_reference_values


def _check(name: str, ok: bool, detail: str = "") -> bool:
    status = "PASS" if ok else "FAIL"
    print(f"[{status}] {name}" + (f": {detail}" if detail else ""))
    return ok


def run(cfg: RunConfig) -> int:
    seed = cfg.seed
    ok = True

    # character algebra, k <= 20 here (full range in the test suite)
    algebra_ok = True
    for k in range(1, 21):
        chars = character_table(k)
        if len(chars) != totient(k):
            algebra_ok = False
        for chi in chars:
            s = sum(evaluate(chi, n) for n in range(1, k + 1))
            if chi.principal:
                continue
            if abs(s.real) > 1e-12 or abs(s.imag) > 1e-12:
                algebra_ok = False
    ok &= _check("character algebra k<=20", algebra_ok)

    chi7 = builtin_character("paper-chi7")
    ok &= _check("builtin chi7 resolves", chi7.index is not None,
                 f"canonical index {chi7.index}")

    # Ei antiderivative vs adaptive quadrature (one oscillatory point)
    impl = ei_cos_integral(10.0, 3.0, 1e3)
    oracle, _ = integrate.quad(lambda v: math.exp(v) / v, math.log(3.0),
                               math.log(1e3), weight="cos", wvar=10.0)
    ok &= _check("Ei integral vs quadrature", abs(impl - oracle) <= 1e-8 * abs(oracle),
                 f"rel={abs(impl - oracle) / abs(oracle):.2e}")

    # Euler product at s=2 against log(pi^2/6)
    state = sieve_actual(10**6)
    trace = log_euler_product(state, character_table(1)[0], 2.0 + 0j,
                              state.count(), include_two=True)
    target = math.log(math.pi**2 / 6.0)
    gap = abs(complex(trace.partial_log[-1]).real - target)
    ok &= _check("zeta(2) Euler product", gap < 1e-6, f"gap={gap:.2e}")

    # L(1, chi4) reference against the classical constant
    chi4 = character_table(4)[1]
    lref = dirichlet_l_reference(chi4, 1.0 + 0j)
    ok &= _check("L(1, chi4) reference", abs(lref - math.pi / 4) < 1e-10,
                 f"err={abs(lref - math.pi / 4):.2e}")

    # zeta reference at a classical point
    z2 = zeta_reference(2.0 + 0j)
    ok &= _check("zeta(2) reference", abs(z2 - math.pi**2 / 6) < 1e-12)

    # counting law at reduced scale
    spec = EnsembleSpec()
    n_states = 200
    counts = np.array([sample_cramer(spec, substream_seed(seed, i), 10**5)
                       .count() for i in range(n_states)])
    expect = expected_pi(10**5)
    se = math.sqrt(expect / n_states)
    ok &= _check("counting law (200 states)", abs(counts.mean() - expect) <= 4 * se,
                 f"mean={counts.mean():.1f} expect={expect:.1f}")

    # Lyapunov scaling
    r = lyapunov_ratio(4000, 1.0) / lyapunov_ratio(1000, 1.0)
    ok &= _check("lyapunov ratio(4N)/ratio(N)", 0.4 <= r <= 0.6, f"r={r:.3f}")

    # deterministic references on the actual primes
    vals = actual_reference_values(chi7, 0.0, 5000)["normalized"]
    best = min(abs(v + 0.145) for v in
               (vals["stopped_exclude2"], vals["stopped_include2"]))
    ok &= _check("angle-series reference -0.145", best <= 0.005,
                 f"closest |diff|={best:.4f}")

    # reduced CLT ensembles
    n_states = 1500
    ens_c = make_angle_ensemble(chi7, 5000, seed)
    stats_c = run_parallel(n_states, ens_c.state_statistic, cfg.threads)
    fit_c = fit_normal(stats_c)
    _, p_c = ks_test(stats_c)
    ok &= _check("clt-c ensemble (1500 states)",
                 abs(fit_c.mu_hat) <= 0.08 and 0.95 <= fit_c.sigma_hat <= 1.05
                 and p_c >= 1e-4,
                 f"mu={fit_c.mu_hat:+.4f} sigma={fit_c.sigma_hat:.4f} p={p_c:.3f}")

    from .characters import principal_character

    ens_b = make_oscillatory_ensemble(principal_character(1), 1000.0, 5000, seed)
    stats_b = run_parallel(n_states, ens_b.state_statistic, cfg.threads)
    fit_b = fit_normal(stats_b)
    _, p_b = ks_test(stats_b)
    ok &= _check("clt-b ensemble (1500 states)",
                 abs(fit_b.mu_hat) <= 0.08 and 0.95 <= fit_b.sigma_hat <= 1.05
                 and p_b >= 1e-4,
                 f"mu={fit_b.mu_hat:+.4f} sigma={fit_b.sigma_hat:.4f} p={p_b:.3f}")

    # GS constraints at reduced scale
    base = sieve_actual(nth_prime_bound(501))
    gs_ok = True
    clamps = 0
    base_primes = np.flatnonzero(base.membership)[:500]
    for i in range(100):
        st = sample_gs(base, 7, 7, substream_seed(seed, i), n_terms=500)
        chosen = np.flatnonzero(st.membership)
        clamps += st.clamp_events
        if not (len(chosen) == 500 and np.all(chosen >= base_primes)
                and np.all(chosen <= base_primes + 7)
                and np.all((chosen - base_primes) % 7 == 0)):
            gs_ok = False
    ok &= _check("gs constraints (100 states)", gs_ok and clamps == 0,
                 f"clamps={clamps}")

    print("selftest:", "all checks passed" if ok else "FAILURES above")
    return 0 if ok else 4
