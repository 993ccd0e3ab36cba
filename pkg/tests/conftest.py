"""Shared fixtures: the expensive ensembles run once per session."""

import json

import numpy as np
import pytest

from cramer_clt import builtin_character, sieve_actual
from cramer_clt.cli import main as cli_main

ACCEPT_SEED = 20260810


@pytest.fixture(scope="session")
def chi7():
    return builtin_character("paper-chi7")


@pytest.fixture(scope="session")
def actual_primes_100k():
    return sieve_actual(100_000)


def _run_and_load(out_dir, args):
    rc = cli_main(args + ["--out-dir", str(out_dir)])
    assert rc == 0, f"CLI run failed with exit code {rc}"
    sub = next(out_dir.iterdir())
    manifest = json.loads((sub / "manifest.json").read_text())
    stats = np.loadtxt(sub / "stats.csv", skiprows=1)
    return manifest, stats


@pytest.fixture(scope="session")
def clt_c_run(tmp_path_factory):
    """The figure-1 style run: modulus 7, builtin character, 10^4 states."""
    out = tmp_path_factory.mktemp("acc-clt-c")
    return _run_and_load(out, [
        "clt-c", "--modulus", "7", "--character", "paper-chi7",
        "--n-terms", "5000", "--states", "10000", "--seed", str(ACCEPT_SEED),
    ])


@pytest.fixture(scope="session")
def clt_b_run(tmp_path_factory):
    """The figure-2 style run: modulus 1, t = 1000, 10^4 states."""
    out = tmp_path_factory.mktemp("acc-clt-b")
    return _run_and_load(out, [
        "clt-b", "--modulus", "1", "--n-terms", "5000", "--t", "1000",
        "--states", "10000", "--seed", str(ACCEPT_SEED),
    ])
