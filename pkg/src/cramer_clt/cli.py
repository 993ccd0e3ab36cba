"""Command-line entry point: seeded experiments, manifests, CSV and SVG output.

Subcommands
-----------
clt-c     ensemble of normalized character-angle series, histogram + fit + KS
clt-b     same for the principal-character oscillatory series at fixed t
actual    deterministic normalized statistics on the actual primes
euler     truncated zeta products (mode=zeta) or L-product vs reference (mode=l)
gs-check  windowed-resampling ensemble constraint verification
selftest  scaled-down deterministic acceptance checks (exit 4 on failure)

Exit codes: 0 success, 2 configuration error, 3 numeric domain error,
4 selftest failure.
"""

from __future__ import annotations

import argparse
import math
import sys
import time
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import __version__
from .characters import (
    BUILTIN_CHI7,
    DirichletCharacter,
    builtin_character,
    character_from_angles,
    character_table,
    evaluate,
    principal_character,
)
from .config import RunConfig, build_config
from .ensemble import make_angle_ensemble, make_oscillatory_ensemble, run_parallel
from .errors import ConfigError, CramerCltError, DomainError, InsufficientStateError
from .eulerprod import (
    dirichlet_l_reference,
    log_euler_product,
    write_trace_csv,
    zeta_truncated,
)
from .manifest import write_manifest
from .pseudoprimes import nth_prime_bound, sample_gs, sieve_actual
from .series import (
    deterministic_limit,
    mixed_series,
    normalize_angle_series,
    normalize_oscillatory_series,
    series_up_to,
)
from .stats import fit_normal, histogram, ks_test, write_histogram_csv


def resolve_character(cfg: RunConfig) -> DirichletCharacter:
    """--character accepts a canonical index, a builtin name, an inline
    comma-separated angle list, or a file path."""
    spec = cfg.character
    if spec == "":
        return principal_character(cfg.modulus)
    try:
        index = int(spec)
    except ValueError:
        index = None
    if index is not None:
        table = character_table(cfg.modulus)
        if not 0 <= index < len(table):
            raise ConfigError(
                f"character index {index} out of range for modulus {cfg.modulus}")
        return table[index]
    if spec == BUILTIN_CHI7:
        chi = builtin_character(spec)
        if cfg.modulus not in (1, chi.modulus):
            raise ConfigError(f"builtin {spec} has modulus {chi.modulus}, "
                              f"config says {cfg.modulus}")
        return chi
    if "," in spec:
        return _character_from_tokens(spec.split(","), where="inline character")
    path = Path(spec)
    if path.is_file():
        return _character_from_file(path)
    raise ConfigError(f"cannot resolve character {spec!r}: "
                      "not an index, builtin name, angle list, or file")


def _character_from_tokens(tokens, where: str) -> DirichletCharacter:
    """Parse chi(1..k) entries: rational angles in turns ("0", "1/3") or
    "zero"/"-" for chi(n) = 0.  Validated against all table invariants."""
    entries = []
    for tok in tokens:
        tok = tok.strip()
        if not tok:
            continue
        if tok.lower() in ("zero", "-"):
            entries.append(None)
        else:
            try:
                entries.append(Fraction(tok))
            except (ValueError, ZeroDivisionError) as exc:
                raise ConfigError(f"{where}: bad angle token {tok!r}") from exc
    try:
        return character_from_angles(len(entries), entries)
    except DomainError as exc:
        raise ConfigError(f"{where}: invalid character table: {exc}") from exc


def _character_from_file(path: Path) -> DirichletCharacter:
    tokens = path.read_text(encoding="utf-8").replace(",", " ").split()
    return _character_from_tokens(tokens, where=str(path))


def _character_echo(chi: DirichletCharacter) -> dict:
    angles = ["zero" if q is None else str(q) for q in chi.values]
    return {
        "modulus": chi.modulus,
        "canonical_index": chi.index,
        "name": chi.name,
        "angles_by_residue": angles,
        "a_factor": str(chi.a_factor),
    }


def _out_dir(cfg: RunConfig, experiment: str) -> Path:
    d = Path(cfg.out_dir) / f"{experiment}-{cfg.seed}"
    d.mkdir(parents=True, exist_ok=True)
    return d


def _ensemble_results(stats: np.ndarray, cfg: RunConfig, out: Path) -> tuple[dict, dict]:
    """Fit, KS, histogram CSV, per-state stats CSV; shared by clt-c/clt-b."""
    warnings = []
    results: dict = {}
    if len(stats) >= 2:
        fit = fit_normal(stats)
        results["fit"] = {"mu_hat": fit.mu_hat, "sigma_hat": fit.sigma_hat,
                          "n": fit.n}
    else:
        results["fit"] = None
        warnings.append("single state: no fit")
    if len(stats) >= 8:
        d, p = ks_test(stats)
        results["ks"] = {"d": d, "p_value": p}
    else:
        results["ks"] = None
        warnings.append("fewer than 8 states: no KS test")
    artifacts = {}
    stats_path = out / "stats.csv"
    with open(stats_path, "w", encoding="utf-8") as f:
        f.write("normalized\n")
        for v in stats:
            f.write(f"{v:.17g}\n")
    artifacts["stats_csv"] = stats_path.name
    if len(stats) >= 1:
        hist = histogram(stats, bins=cfg.bins)
        csv_path = out / "hist.csv"
        write_histogram_csv(hist, csv_path)
        artifacts["histogram_csv"] = csv_path.name
        if cfg.svg:
            from .figures import render_histogram_svg

            fit_d = results["fit"]
            render_histogram_svg(
                csv_path, out / "hist.svg",
                None if fit_d is None else fit_d["mu_hat"],
                None if fit_d is None else fit_d["sigma_hat"],
                f"{len(stats)} states")
            artifacts["histogram_svg"] = "hist.svg"
    results["warnings"] = warnings
    return results, artifacts


def run_clt_c(cfg: RunConfig) -> dict:
    chi = resolve_character(cfg)
    if chi.principal:
        raise ConfigError("clt-c needs a non-principal character "
                          "(use clt-b for the principal series)")
    t0 = time.monotonic()
    ens = make_angle_ensemble(chi, cfg.n_terms, cfg.seed)
    stats = run_parallel(cfg.states, ens.state_statistic, cfg.threads)
    out = _out_dir(cfg, "clt-c")
    results, artifacts = _ensemble_results(stats, cfg, out)
    manifest = {
        "experiment": "CLT_C",
        "version": __version__,
        "parameters": {
            "modulus": chi.modulus,
            "character": _character_echo(chi),
            "n_terms": cfg.n_terms,
            "states": cfg.states,
            "seed": cfg.seed,
            "bins": cfg.bins,
            "threads": cfg.threads,
            "ensemble": {
                "kind": "cramer",
                "coprime_filtered": False,
                "prefix": "deterministic-nlogn",
                "cutoff": ens.limit,
            },
        },
        "results": results,
        "artifacts": artifacts,
        "wall_time_s": time.monotonic() - t0,
    }
    write_manifest(manifest, out / "manifest.json")
    return manifest


def run_clt_b(cfg: RunConfig) -> dict:
    chi = principal_character(cfg.modulus)
    t0 = time.monotonic()
    ens = make_oscillatory_ensemble(chi, cfg.t, cfg.n_terms, cfg.seed)
    stats = run_parallel(cfg.states, ens.state_statistic, cfg.threads)
    out = _out_dir(cfg, "clt-b")
    results, artifacts = _ensemble_results(stats, cfg, out)
    if cfg.t == 0.0:
        results["warnings"].append("t = 0: outside the large-t regime")
    results["mean_subtracted"] = ens.mean
    manifest = {
        "experiment": "CLT_B",
        "version": __version__,
        "parameters": {
            "modulus": cfg.modulus,
            "n_terms": cfg.n_terms,
            "t": cfg.t,
            "t_gt_sqrt_n": abs(cfg.t) > math.sqrt(cfg.n_terms),
            "states": cfg.states,
            "seed": cfg.seed,
            "bins": cfg.bins,
            "threads": cfg.threads,
            "ensemble": {
                "kind": "cramer",
                "coprime_filtered": False,
                "prefix": "deterministic-nlogn",
                "cutoff": ens.limit,
            },
        },
        "results": results,
        "artifacts": artifacts,
        "wall_time_s": time.monotonic() - t0,
    }
    write_manifest(manifest, out / "manifest.json")
    return manifest


def actual_reference_values(chi: DirichletCharacter, t: float,
                            n_terms: int) -> dict:
    """Normalized statistics on the actual primes, all four conventions.

    Conventions: the prefix either stops at the N-th member (first N odd
    primes) or at the deterministic limit floor(N log N); the prime 2 is
    either excluded (states never contain it) or its term is added back.
    """
    limit = deterministic_limit(n_terms)
    cutoff = max(nth_prime_bound(n_terms + 1), limit) + 10
    state = sieve_actual(cutoff)
    two_term = 0.0
    chi2 = evaluate(chi, 2)
    if chi2 != 0:
        theta2 = math.atan2(chi2.imag, chi2.real)
        two_term = math.cos(theta2 + t * math.log(2.0))

    raw = {
        "stopped_exclude2": mixed_series(state, chi, t, n_terms),
        "stopped_include2": two_term + mixed_series(state, chi, t, n_terms - 1),
        "cutoff_exclude2": series_up_to(state, chi, t, limit),
    }
    raw["cutoff_include2"] = two_term + raw["cutoff_exclude2"]

    if chi.principal:
        normalize = lambda r: normalize_oscillatory_series(  # noqa: E731
            r, t, n_terms, chi.modulus)
    else:
        normalize = lambda r: normalize_angle_series(  # noqa: E731
            r, n_terms, chi.modulus, chi.a_factor)
    return {
        "raw": raw,
        "normalized": {name: normalize(r) for name, r in raw.items()},
    }


def run_actual(cfg: RunConfig) -> dict:
    chi = resolve_character(cfg)
    t0 = time.monotonic()
    series_kind = "oscillatory" if chi.principal else "angle"
    values = actual_reference_values(chi, cfg.t, cfg.n_terms)
    out = _out_dir(cfg, "actual")
    manifest = {
        "experiment": "ACTUAL_REFERENCE",
        "version": __version__,
        "parameters": {
            "modulus": chi.modulus,
            "character": _character_echo(chi),
            "series": series_kind,
            "n_terms": cfg.n_terms,
            "t": cfg.t,
            "seed": cfg.seed,
        },
        "results": values,
        "artifacts": {},
        "wall_time_s": time.monotonic() - t0,
    }
    write_manifest(manifest, out / "manifest.json")
    return manifest


def run_euler(cfg: RunConfig) -> dict:
    t0 = time.monotonic()
    out = _out_dir(cfg, "euler")
    artifacts: dict = {}
    if cfg.mode == "zeta":
        ts = [float(x) for x in cfg.t_grid.split(",") if x.strip()]
        if not ts:
            raise ConfigError("euler zeta mode needs a non-empty --t-grid")
        rows = []
        for tv in ts:
            s = complex(cfg.sigma, tv)
            plog, residual = zeta_truncated(s, tv, cfg.c_mult)
            rows.append({
                "t": tv,
                "n_factors": max(math.ceil(cfg.c_mult * tv * tv), 10),
                "product_log": [plog.real, plog.imag],
                "residual": [residual.real, residual.imag],
                "abs_residual": abs(residual),
            })
        absr = [r["abs_residual"] for r in rows]
        results = {
            "mode": "zeta",
            "sigma": cfg.sigma,
            "c_mult": cfg.c_mult,
            "grid": rows,
            "residual_strictly_decreasing":
                all(b < a for a, b in zip(absr, absr[1:])),
        }
        # convergence trace for the final grid point
        n_t = max(math.ceil(cfg.c_mult * ts[-1] ** 2), 10)
        state = sieve_actual(nth_prime_bound(n_t + 1))
        trace = log_euler_product(state, principal_character(1),
                                  complex(cfg.sigma, ts[-1]), n_t - 1,
                                  include_two=True)
        write_trace_csv(trace, out / "trace.csv")
        artifacts["trace_csv"] = "trace.csv"
    elif cfg.mode == "l":
        chi = resolve_character(cfg)
        if chi.principal:
            raise ConfigError("euler L mode needs a non-principal character")
        s = complex(cfg.sigma, cfg.t_im)
        state = sieve_actual(nth_prime_bound(cfg.n_factors + 1))
        trace = log_euler_product(state, chi, s, cfg.n_factors - 1,
                                  include_two=True)
        reference = dirichlet_l_reference(chi, s)
        import cmath

        log_ref = cmath.log(reference)
        plog = complex(trace.partial_log[-1])
        gap = abs(plog - log_ref)
        write_trace_csv(trace, out / "trace.csv")
        artifacts["trace_csv"] = "trace.csv"
        results = {
            "mode": "l",
            "character": _character_echo(chi),
            "s": [s.real, s.imag],
            "n_factors": trace.n_factors,
            "product_log": [plog.real, plog.imag],
            "reference": [reference.real, reference.imag],
            "log_gap": gap,
        }
    else:
        raise ConfigError(f"unknown euler mode {cfg.mode!r}")
    manifest = {
        "experiment": "EULER_PRODUCT",
        "version": __version__,
        "parameters": {
            "mode": cfg.mode,
            "sigma": cfg.sigma,
            "t_grid": cfg.t_grid,
            "t_im": cfg.t_im,
            "c_mult": cfg.c_mult,
            "n_factors": cfg.n_factors,
            "modulus": cfg.modulus,
            "seed": cfg.seed,
        },
        "results": results,
        "artifacts": artifacts,
        "wall_time_s": time.monotonic() - t0,
    }
    write_manifest(manifest, out / "manifest.json")
    return manifest


def run_gs_check(cfg: RunConfig) -> dict:
    if cfg.gs_window < 0:
        raise ConfigError("gs-check needs --gs-window >= 0")
    t0 = time.monotonic()
    n_primes = cfg.n_terms
    base = sieve_actual(nth_prime_bound(n_primes + 1))
    base_primes = np.flatnonzero(base.membership)[:n_primes]
    total = violations = clamps = 0
    from .rng import substream_seed

    for i in range(cfg.states):
        st = sample_gs(base, cfg.gs_window, cfg.modulus,
                       substream_seed(cfg.seed, i), n_terms=n_primes)
        chosen = np.flatnonzero(st.membership)
        ok = (len(chosen) == n_primes
              and np.all(chosen >= base_primes)
              and np.all(chosen <= base_primes + cfg.gs_window)
              and np.all((chosen - base_primes) % cfg.modulus == 0)
              and np.all(np.diff(chosen) > 0))
        total += n_primes
        clamps += st.clamp_events
        if not ok:
            violations += 1
    results = {
        "states": cfg.states,
        "primes_per_state": n_primes,
        "window": cfg.gs_window,
        "modulus": cfg.modulus,
        "states_with_violations": violations,
        "clamp_fraction": clamps / total if total else 0.0,
        "pass": violations == 0 and (clamps / total if total else 0.0) < 0.01,
    }
    out = _out_dir(cfg, "gs-check")
    manifest = {
        "experiment": "GS_CHECK",
        "version": __version__,
        "parameters": {
            "modulus": cfg.modulus,
            "gs_window": cfg.gs_window,
            "n_terms": n_primes,
            "states": cfg.states,
            "seed": cfg.seed,
        },
        "results": results,
        "artifacts": {},
        "wall_time_s": time.monotonic() - t0,
    }
    write_manifest(manifest, out / "manifest.json")
    return manifest


def run_selftest(cfg: RunConfig) -> int:
    """Scaled-down deterministic checks; returns a process exit code."""
    from . import selftest

    return selftest.run(cfg)


def _add_common_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", default=None, help="key=value config file")
    p.add_argument("--modulus", type=int, default=None)
    p.add_argument("--character", default=None,
                   help="canonical index, builtin name, or file path")
    p.add_argument("--n-terms", dest="n_terms", type=int, default=None)
    p.add_argument("--t", type=float, default=None)
    p.add_argument("--states", type=int, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--bins", type=int, default=None)
    p.add_argument("--out-dir", dest="out_dir", default=None)
    p.add_argument("--threads", type=int, default=None)
    svg = p.add_mutually_exclusive_group()
    svg.add_argument("--svg", dest="svg", action="store_true", default=None)
    svg.add_argument("--no-svg", dest="svg", action="store_false", default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cramer-clt",
        description="Seeded Monte Carlo experiments for character series "
                    "over randomized pseudo-primes")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("clt-c", "clt-b", "actual", "gs-check", "selftest"):
        p = sub.add_parser(name)
        _add_common_flags(p)
        if name == "gs-check":
            p.add_argument("--gs-window", dest="gs_window", type=int, default=None)
    p = sub.add_parser("euler")
    _add_common_flags(p)
    p.add_argument("--mode", choices=("zeta", "l"), default=None)
    p.add_argument("--sigma", type=float, default=None)
    p.add_argument("--t-grid", dest="t_grid", default=None)
    p.add_argument("--t-im", dest="t_im", type=float, default=None)
    p.add_argument("--c-mult", dest="c_mult", type=float, default=None)
    p.add_argument("--n-factors", dest="n_factors", type=int, default=None)
    return parser


_RUNNERS = {
    "clt-c": run_clt_c,
    "clt-b": run_clt_b,
    "actual": run_actual,
    "euler": run_euler,
    "gs-check": run_gs_check,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    overrides = {k: v for k, v in vars(args).items()
                 if k not in ("command", "config")}
    try:
        cfg = build_config(overrides, args.config)
        if args.command == "selftest":
            return run_selftest(cfg)
        manifest = _RUNNERS[args.command](cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (DomainError, InsufficientStateError) as exc:
        print(f"numeric domain error: {exc}", file=sys.stderr)
        return 3
    except CramerCltError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    out = Path(cfg.out_dir) / f"{args.command}-{cfg.seed}" / "manifest.json"
    print(f"{manifest['experiment']}: wrote {out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
