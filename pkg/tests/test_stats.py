"""Histogram, normal fit, and KS-test behavior against scipy oracles."""

import math

import numpy as np
import pytest
from scipy import special, stats as sps

from cramer_clt import (
    DomainError,
    InsufficientDataError,
    fit_normal,
    histogram,
    ks_test,
    normal_cdf,
)
from cramer_clt.stats import (
    kolmogorov_survival,
    read_histogram_csv,
    write_histogram_csv,
)


def test_histogram_degenerate_span():
    h = histogram([0.0, 0.0, 0.0], bins=1)
    assert h.edges[0] == -0.5 and h.edges[-1] == 0.5
    assert h.density[0] == pytest.approx(1.0)


def test_histogram_normalization_and_permutation():
    rng = np.random.default_rng(3)
    x = rng.normal(size=5000)
    h = histogram(x, bins=40)
    widths = np.diff(h.edges)
    assert float((h.density * widths).sum()) == pytest.approx(1.0, abs=1e-12)
    h2 = histogram(x[::-1], bins=40)
    assert np.array_equal(h.density, h2.density)
    assert np.array_equal(h.edges, h2.edges)
    assert np.all(np.diff(h.edges) > 0)


def test_histogram_against_normal_pdf():
    rng = np.random.default_rng(11)
    x = rng.normal(size=10**6)
    h = histogram(x, bins=100)
    centers = 0.5 * (h.edges[:-1] + h.edges[1:])
    pdf = np.exp(-0.5 * centers**2) / math.sqrt(2 * math.pi)
    assert np.max(np.abs(h.density - pdf)) < 0.02


def test_histogram_domain():
    with pytest.raises(DomainError):
        histogram([])
    with pytest.raises(DomainError):
        histogram([1.0], bins=0)


def test_fit_normal_two_points():
    fit = fit_normal([-1.0, 1.0])
    assert fit.mu_hat == 0.0
    assert fit.sigma_hat == pytest.approx(math.sqrt(2.0), rel=1e-15)


def test_fit_normal_equivariance():
    rng = np.random.default_rng(5)
    x = rng.normal(size=1000)
    base = fit_normal(x)
    shifted = fit_normal(x + 7.5)
    assert shifted.mu_hat == pytest.approx(base.mu_hat + 7.5, abs=1e-12)
    assert shifted.sigma_hat == pytest.approx(base.sigma_hat, rel=1e-12)


def test_fit_normal_recovers_parameters():
    rng = np.random.default_rng(7)
    x = rng.normal(3.0, 2.0, size=10**5)
    fit = fit_normal(x)
    assert abs(fit.mu_hat - 3.0) < 3 * 2.0 / math.sqrt(10**5)
    assert abs(fit.sigma_hat - 2.0) < 3 * 2.0 / math.sqrt(2 * 10**5)


def test_fit_normal_needs_two():
    with pytest.raises(InsufficientDataError):
        fit_normal([1.0])


def test_normal_cdf_values():
    assert normal_cdf(0.0) == 0.5
    # frozen from a high-precision erf oracle
    assert normal_cdf(1.96) == pytest.approx(0.9750021048517795, abs=1e-14)
    for x in (-3.5, -1.0, 0.3, 2.2):
        assert normal_cdf(-x) == pytest.approx(1.0 - normal_cdf(x), abs=1e-14)
        assert normal_cdf(x) == pytest.approx(float(special.ndtr(x)), abs=1e-13)


def test_kolmogorov_survival_against_scipy():
    for lam in (0.4, 0.8, 1.0, 1.5, 2.0, 3.0):
        assert kolmogorov_survival(lam) == pytest.approx(
            float(special.kolmogorov(lam)), abs=1e-10)
    assert kolmogorov_survival(0.05) == 1.0


def test_ks_constructed_quantiles():
    n = 1000
    samples = sps.norm.ppf((np.arange(1, n + 1) - 0.5) / n)
    d, p = ks_test(samples)
    assert d < 1e-3
    assert p > 0.999


def test_ks_rejects_uniform():
    rng = np.random.default_rng(13)
    _, p = ks_test(rng.random(10**4))
    assert p < 1e-10


def test_ks_calibration():
    rng = np.random.default_rng(17)
    passes = sum(ks_test(rng.normal(size=10**4))[1] >= 0.001 for _ in range(100))
    assert passes >= 99


def test_ks_matches_scipy_statistic():
    rng = np.random.default_rng(23)
    x = rng.normal(size=5000)
    d, p = ks_test(x)
    ref = sps.kstest(x, "norm")
    assert d == pytest.approx(ref.statistic, abs=1e-12)
    assert p == pytest.approx(ref.pvalue, abs=5e-3)  # scipy applies small-n tweaks


def test_ks_probability_integral_transform_invariance():
    # D is invariant under the increasing map Phi applied to samples and reference
    rng = np.random.default_rng(29)
    x = np.sort(rng.normal(size=2000))
    d, _ = ks_test(x)
    u = np.array([normal_cdf(v) for v in x])
    n = len(u)
    i = np.arange(1, n + 1)
    d_uniform = max((i / n - u).max(), (u - (i - 1) / n).max())
    assert d == pytest.approx(d_uniform, abs=1e-14)


def test_ks_needs_eight():
    with pytest.raises(InsufficientDataError):
        ks_test(np.zeros(7))


def test_histogram_csv_roundtrip(tmp_path):
    h = histogram(np.linspace(-2, 2, 101), bins=7)
    path = tmp_path / "hist.csv"
    write_histogram_csv(h, path)
    text = path.read_text().splitlines()
    assert text[0] == "bin_left,bin_right,density"
    assert len(text) == 8
    back = read_histogram_csv(path)
    assert np.allclose(back.edges, h.edges, atol=1e-10)
    assert np.allclose(back.density, h.density, atol=1e-10)
