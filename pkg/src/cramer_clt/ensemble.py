"""Seeded parallel ensemble evaluation with deterministic reduction.

States are indexed 0..n_states-1; state i uses the substream seed
mix(master_seed, i).  Workers write each normalized statistic into a
preallocated slot array at its state index, so the output is identical for
any worker count or scheduling order.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .characters import DirichletCharacter
from .errors import DomainError
from .pseudoprimes import EnsembleSpec, StateKind, sample_cramer
from .rng import substream_seed
from .series import (
    SeriesResult,
    cos_coefficients,
    deterministic_limit,
    log_weight_factor,
    oscillatory_mean,
)
from .characters import totient


@dataclass(frozen=True)
class CltEnsemble:
    """Shared, read-only setup for one CLT experiment.

    The per-state series is evaluated over the deterministic prefix
    n <= floor(N log N); with that prefix the summands are independent
    Bernoulli terms whose aggregate variance matches the s^2 N /
    (1 + loglogN/logN) denominator of the normalization.
    """

    chi: DirichletCharacter
    t: float
    n_terms: int
    master_seed: int
    limit: int
    coef: np.ndarray
    mean: float
    prefactor: float
    spec: EnsembleSpec

    @property
    def variance(self) -> float:
        """Aggregate variance divided out by the normalization."""
        return 1.0 / (self.prefactor * self.prefactor)

    def state_statistic(self, index: int) -> float:
        seed = substream_seed(self.master_seed, index)
        state = sample_cramer(self.spec, seed, self.limit)
        raw = float(state.membership @ self.coef)
        return self.prefactor * (raw - self.mean)

    def state_result(self, index: int) -> SeriesResult:
        """Full evaluation record for one state."""
        seed = substream_seed(self.master_seed, index)
        state = sample_cramer(self.spec, seed, self.limit)
        raw = float(state.membership @ self.coef)
        return SeriesResult(
            raw=raw, n_terms=self.n_terms, t=self.t, mean=self.mean,
            variance=self.variance,
            normalized=self.prefactor * (raw - self.mean),
            state_seed=seed, modulus=self.chi.modulus)


def make_angle_ensemble(chi: DirichletCharacter, n_terms: int,
                        master_seed: int) -> CltEnsemble:
    """Ensemble for the non-principal angle series (mean taken as 0)."""
    if chi.principal:
        raise DomainError("angle ensemble needs a non-principal character")
    limit = deterministic_limit(n_terms)
    s2 = float(chi.a_factor) * totient(chi.modulus) / chi.modulus
    prefactor = math.sqrt(log_weight_factor(n_terms) / (s2 * n_terms))
    return CltEnsemble(
        chi=chi, t=0.0, n_terms=n_terms, master_seed=master_seed,
        limit=limit, coef=cos_coefficients(chi, 0.0, limit),
        mean=0.0, prefactor=prefactor,
        spec=EnsembleSpec(StateKind.CRAMER, modulus=chi.modulus))


def make_oscillatory_ensemble(chi_principal: DirichletCharacter, t: float,
                              n_terms: int, master_seed: int) -> CltEnsemble:
    """Ensemble for the principal-character oscillatory series."""
    k = chi_principal.modulus
    limit = deterministic_limit(n_terms)
    s2 = totient(k) / (2.0 * k)
    prefactor = math.sqrt(log_weight_factor(n_terms) / (s2 * n_terms))
    return CltEnsemble(
        chi=chi_principal, t=t, n_terms=n_terms, master_seed=master_seed,
        limit=limit, coef=cos_coefficients(chi_principal, t, limit),
        mean=oscillatory_mean(t, n_terms, k), prefactor=prefactor,
        spec=EnsembleSpec(StateKind.CRAMER, modulus=k))


def run_parallel(n_states: int, state_fn, threads: int = 0) -> np.ndarray:
    """Evaluate state_fn(i) for i in 0..n_states-1 into a slot array."""
    if threads == 0:
        threads = os.cpu_count() or 1
    slots = np.empty(n_states, dtype=np.float64)
    if threads <= 1 or n_states < 4:
        for i in range(n_states):
            slots[i] = state_fn(i)
        return slots

    chunk = max(16, n_states // (threads * 8))

    def worker(lo: int) -> None:
        for i in range(lo, min(lo + chunk, n_states)):
            slots[i] = state_fn(i)

    with ThreadPoolExecutor(max_workers=threads) as pool:
        list(pool.map(worker, range(0, n_states, chunk)))
    return slots
