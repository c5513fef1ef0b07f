import math

import numpy as np
import pytest
from scipy import integrate

from replisize.bayes_factor import (
    AnalysisPriorSample,
    bf01_from_data,
    log_bf01,
    log_bf01_quadrature,
    log_m0,
    log_m1_mc,
    log_m1_quadrature,
)
from replisize.distributions import HalfT
from replisize.model import DesignPoint

ANALYSIS = HalfT(nu=4, sigma=1 / 7)


@pytest.fixture(scope="module")
def sample_10k():
    return AnalysisPriorSample.draw(ANALYSIS, 10_000, seed=7)


def test_log_m0_vanishes_at_origin():
    assert log_m0(0.0, DesignPoint(n=1, m=5)) == 0.0


def test_log_m0_direct_arithmetic():
    # ((m-1)/2) * ln n - q/2 at m=3 reduces to ln n - q/2
    assert log_m0(2.0, DesignPoint(n=7, m=3)) == pytest.approx(math.log(7) - 1.0)


def test_log_m0_linear_in_q_with_slope_minus_half():
    design = DesignPoint(n=50, m=6)
    q = np.arange(0.0, 30.0, 0.5)
    vals = log_m0(q, design)
    slopes = np.diff(vals) / np.diff(q)
    assert np.allclose(slopes, -0.5)


def test_degenerate_prior_sample_collapses_to_m0():
    zeros = AnalysisPriorSample(np.zeros(500))
    for q, n, m in [(0.0, 1, 2), (3.7, 80, 8), (250.0, 100, 8), (9.9, 7, 44)]:
        design = DesignPoint(n, m)
        assert log_m1_mc(q, design, zeros) == log_m0(q, design)
        assert log_bf01(q, design, zeros) == 0.0


def test_log_m1_survives_extreme_q(sample_10k):
    for m in (2, 8, 50):
        design = DesignPoint(n=100, m=m)
        for q in (0.0, 1e2, 1e4, 1e6):
            val = log_m1_mc(q, design, sample_10k)
            assert math.isfinite(val)
            assert math.isfinite(log_bf01(q, design, sample_10k))


def test_underflow_regime_matches_quadrature():
    # at this q the linear-space mixture terms underflow to zero, so only
    # the log-sum-exp path can track the quadrature value
    design = DesignPoint(n=100, m=8)
    sample = AnalysisPriorSample.draw(ANALYSIS, 1_000_000, seed=7)
    mc = log_m1_mc(250.0, design, sample)
    quad = log_m1_quadrature(250.0, design, ANALYSIS)
    assert math.isfinite(mc)
    assert mc == pytest.approx(quad, abs=5e-3)


def test_estimate_stabilizes_as_sample_grows():
    design = DesignPoint(n=80, m=8)
    small = AnalysisPriorSample.draw(ANALYSIS, 10_000, seed=21)
    large = AnalysisPriorSample.draw(ANALYSIS, 1_000_000, seed=22)
    diff = abs(log_m1_mc(10.0, design, small) - log_m1_mc(10.0, design, large))
    assert diff < 0.02


def test_log_bf01_strictly_decreasing_in_q(sample_10k):
    design = DesignPoint(n=80, m=8)
    vals = log_bf01(np.arange(0.0, 51.0), design, sample_10k)
    assert np.all(np.diff(vals) < 0)


def test_bf_at_zero_q_favours_m0(sample_10k):
    for n, m in [(2, 3), (40, 4), (120, 12)]:
        assert log_bf01(0.0, DesignPoint(n, m), sample_10k) >= 0.0


def test_mc_agrees_with_quadrature_on_grid():
    sample = AnalysisPriorSample.draw(ANALYSIS, 100_000, seed=7)
    for q in (1.0, 10.0, 40.0):
        for n in (40, 120):
            for m in (4, 12):
                design = DesignPoint(n, m)
                mc = log_bf01(q, design, sample)
                quad = log_bf01_quadrature(q, design, ANALYSIS)
                assert mc == pytest.approx(quad, rel=1e-2)


def test_vector_and_scalar_paths_agree(sample_10k):
    design = DesignPoint(n=60, m=6)
    q = np.array([0.0, 3.0, 11.5, 40.0])
    vec = log_bf01(q, design, sample_10k)
    for qi, vi in zip(q, vec):
        assert log_bf01(float(qi), design, sample_10k) == vi


def test_worker_count_does_not_change_results(sample_10k):
    design = DesignPoint(n=80, m=8)
    q = np.random.default_rng(5).chisquare(7, size=20_000)
    assert np.array_equal(
        log_bf01(q, design, sample_10k, workers=1),
        log_bf01(q, design, sample_10k, workers=8),
    )


def test_constant_data_attains_the_bf_maximum(sample_10k):
    t = np.full(8, 0.42)
    logbf = bf01_from_data(t, n=80, sigma=1.0, prior=sample_10k)
    assert logbf == log_bf01(0.0, DesignPoint(80, 8), sample_10k)
    rng = np.random.default_rng(6)
    other = rng.normal(size=8)
    assert bf01_from_data(other, 80, 1.0, sample_10k) < logbf


def test_bf_from_data_is_shift_invariant(sample_10k):
    rng = np.random.default_rng(13)
    t = rng.normal(0.2, 0.15, size=8)
    a = bf01_from_data(t, 80, 1.0, sample_10k)
    b = bf01_from_data(t + 3.3, 80, 1.0, sample_10k)
    assert a == pytest.approx(b, rel=1e-9)


def test_bf_from_data_against_direct_double_integral():
    # independent route: marginals of the raw data vector by quadrature
    # over (mu, gamma) and mu alone, no reduction through the dispersion
    # statistic
    t = np.array([0.1, 0.34, 0.27])
    n, sigma = 50, 1.0
    sample = AnalysisPriorSample.draw(ANALYSIS, 400_000, seed=17)

    def likelihood(mu, var):
        resid = t - mu
        return (2 * np.pi * var) ** (-t.size / 2) * np.exp(
            -0.5 * np.dot(resid, resid) / var)

    m0_full, _ = integrate.quad(
        lambda mu: likelihood(mu, sigma**2 / n), -30, 30, limit=200)
    m1_full, _ = integrate.dblquad(
        lambda mu, g: likelihood(mu, sigma**2 * (1 / n + g * g)) * ANALYSIS.pdf(g),
        0, 8, -30, 30, epsabs=1e-12)
    oracle = math.log(m0_full) - math.log(m1_full)

    mc = bf01_from_data(t, n, sigma, sample)
    assert mc == pytest.approx(oracle, rel=1e-2)


def test_empty_or_invalid_prior_sample_rejected():
    with pytest.raises(ValueError):
        AnalysisPriorSample(np.array([]))
    with pytest.raises(ValueError):
        AnalysisPriorSample(np.array([0.1, -0.2]))
    with pytest.raises(ValueError):
        AnalysisPriorSample(np.array([0.1, np.inf]))


def test_negative_q_rejected(sample_10k):
    design = DesignPoint(n=10, m=4)
    with pytest.raises(ValueError):
        log_m0(-1.0, design)
    with pytest.raises(ValueError):
        log_m1_mc(-1.0, design, sample_10k)


def test_prior_sample_draw_is_reproducible():
    a = AnalysisPriorSample.draw(ANALYSIS, 5000, seed=99)
    b = AnalysisPriorSample.draw(ANALYSIS, 5000, seed=99)
    assert np.array_equal(a.gammas, b.gammas)
    assert a.seed == 99 and a.s == 5000
