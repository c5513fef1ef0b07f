import json
import math

import numpy as np
import pytest

from replisize.bayes_factor import AnalysisPriorSample
from replisize.distributions import FoldedT, HalfT
from replisize.evidence import Thresholds, classify, probs_to_dict, threshold_from_alpha
from replisize.model import DesignPoint
from replisize.predictive import DesignPriorSample, LogBfSample, simulate_bf_m0, simulate_bf_m1

ANALYSIS = HalfT(nu=4, sigma=1 / 7)
DESIGN_PRIOR = FoldedT(nu=4, mu=0.2, sigma=1 / 55)


def _sample(values, model="M0", n=80, m=8):
    values = np.asarray(values, dtype=float)
    return LogBfSample(values=values, model=model, design=DesignPoint(n, m),
                       s=1, t_count=values.size)


@pytest.fixture(scope="module")
def pair_80x8():
    design = DesignPoint(80, 8)
    prior_a = AnalysisPriorSample.draw(ANALYSIS, 4000, seed=99)
    prior_d = DesignPriorSample.draw(DESIGN_PRIOR, 20_000, seed=99)
    m0 = simulate_bf_m0(design, prior_a, 20_000, 99)
    m1 = simulate_bf_m1(design, prior_a, prior_d, 99)
    return m0, m1


def test_triples_sum_to_one_and_overall_is_mixture(pair_80x8):
    m0, m1 = pair_80x8
    probs = classify(m0, m1, Thresholds(3.0, 1 / 3), pi0=0.3)
    for triple in [(probs.p0_c, probs.p0_m, probs.p0_u),
                   (probs.p1_c, probs.p1_m, probs.p1_u),
                   (probs.p_c, probs.p_m, probs.p_u)]:
        assert abs(sum(triple) - 1.0) < 1e-12
        assert all(0.0 <= p <= 1.0 for p in triple)
    assert probs.p_c == pytest.approx(0.3 * probs.p0_c + 0.7 * probs.p1_c, abs=1e-15)


def test_everything_undetermined_at_extreme_cutoffs(pair_80x8):
    m0, m1 = pair_80x8
    probs = classify(m0, m1, Thresholds(k0=1e300, inv_k1=1e-300), pi0=0.5)
    assert probs.p0_u == 1.0 and probs.p1_u == 1.0


def test_pi0_one_reduces_overall_to_m0_triple(pair_80x8):
    m0, m1 = pair_80x8
    probs = classify(m0, m1, Thresholds(3.0, 1 / 3), pi0=1.0)
    assert (probs.p_c, probs.p_m, probs.p_u) == (probs.p0_c, probs.p0_m, probs.p0_u)


def test_values_on_the_cutoffs_count_as_undetermined():
    logs = np.log([0.2, 1 / 3, 1.0, 3.0, 9.0])
    m0 = _sample(logs, "M0")
    m1 = _sample(logs, "M1")
    probs = classify(m0, m1, Thresholds(k0=3.0, inv_k1=1 / 3), pi0=0.5)
    assert probs.p0_c == pytest.approx(0.2)   # only 9.0 clears k0
    assert probs.p0_m == pytest.approx(0.2)   # only 0.2 clears 1/k1
    assert probs.p0_u == pytest.approx(0.6)   # both boundary values included
    assert probs.p1_c == pytest.approx(0.2)


def test_design_mismatch_and_order_rejected(pair_80x8):
    m0, m1 = pair_80x8
    other = _sample([0.0, 1.0], "M1", n=81, m=8)
    with pytest.raises(ValueError, match="design mismatch"):
        classify(m0, other, Thresholds(3.0, 1 / 3), pi0=0.5)
    with pytest.raises(ValueError, match="in that order"):
        classify(m1, m0, Thresholds(3.0, 1 / 3), pi0=0.5)


def test_degenerate_thresholds_need_force(pair_80x8):
    m0, m1 = pair_80x8
    th = Thresholds(k0=0.5, inv_k1=0.8)
    assert th.degenerate
    with pytest.raises(ValueError, match="degenerate"):
        classify(m0, m1, th, pi0=0.5)
    # forced: the overlap counts as undetermined, so the simplex holds
    probs = classify(m0, m1, th, pi0=0.5, force=True)
    for triple in [(probs.p0_c, probs.p0_m, probs.p0_u),
                   (probs.p1_c, probs.p1_m, probs.p1_u)]:
        assert abs(sum(triple) - 1.0) < 1e-12
        assert all(0.0 <= p <= 1.0 for p in triple)
    # tails shrink to the unambiguous regions
    assert probs.p0_c == pytest.approx(np.mean(m0.values > np.log(0.8)))
    assert probs.p0_m == pytest.approx(np.mean(m0.values < np.log(0.5)))


def test_thresholds_validation():
    with pytest.raises(ValueError):
        Thresholds(k0=0.0, inv_k1=0.3)
    with pytest.raises(ValueError):
        Thresholds(k0=3.0, inv_k1=0.0)
    with pytest.raises(ValueError):
        Thresholds(k0=3.0, inv_k1=math.inf)
    assert not Thresholds(k0=math.inf, inv_k1=0.2).degenerate


def test_nearest_rank_on_small_sample():
    values = np.log([1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0, 9.0, 10.0])
    sample = _sample(values)
    # ceil(0.25 * 10) = 3rd order statistic
    assert threshold_from_alpha(sample, 0.25, "lower") == pytest.approx(3.0)
    # ceil(0.75 * 10) = 8th order statistic
    assert threshold_from_alpha(sample, 0.25, "upper") == pytest.approx(8.0)


def test_constant_sample_returns_the_constant():
    sample = _sample(np.full(50, math.log(2.5)))
    assert threshold_from_alpha(sample, 0.1, "lower") == pytest.approx(2.5)
    assert threshold_from_alpha(sample, 0.1, "upper") == pytest.approx(2.5)


def test_threshold_round_trips_to_alpha(pair_80x8):
    m0, m1 = pair_80x8
    t_count = m0.t_count
    for alpha in (0.01, 0.05, 0.1):
        inv_k1 = threshold_from_alpha(m0, alpha, "lower")
        probs = classify(m0, m1, Thresholds(k0=math.inf, inv_k1=inv_k1), pi0=0.5)
        assert abs(probs.p0_m - alpha) <= 1.0 / t_count + 1e-12


def test_threshold_monotone_in_alpha(pair_80x8):
    m0, m1 = pair_80x8
    lowers = [threshold_from_alpha(m0, a, "lower") for a in (0.01, 0.05, 0.2, 0.4)]
    uppers = [threshold_from_alpha(m1, a, "upper") for a in (0.01, 0.05, 0.2, 0.4)]
    assert np.all(np.diff(lowers) >= 0)
    assert np.all(np.diff(uppers) <= 0)


def test_alpha_domain_checked(pair_80x8):
    m0, _ = pair_80x8
    for alpha in (0.0, 0.5, 0.7, -0.1):
        with pytest.raises(ValueError):
            threshold_from_alpha(m0, alpha, "lower")
    with pytest.raises(ValueError):
        threshold_from_alpha(m0, 0.1, "above")


def test_detection_threshold_at_benchmark_design():
    # full-scale lower cutoff for alpha = 0.01 at n=100, m=8
    prior_a = AnalysisPriorSample.draw(ANALYSIS, 10_000, seed=20260809)
    sample = simulate_bf_m0(DesignPoint(100, 8), prior_a, 50_000, 20260809)
    inv_k1 = threshold_from_alpha(sample, 0.01, "lower")
    assert inv_k1 == pytest.approx(0.215, abs=0.015)


def test_null_support_threshold_at_benchmark_design():
    # full-scale upper cutoff for alpha = 0.01 under heterogeneity at n=158, m=8
    design = DesignPoint(158, 8)
    prior_a = AnalysisPriorSample.draw(ANALYSIS, 10_000, seed=20260809)
    prior_d = DesignPriorSample.draw(DESIGN_PRIOR, 50_000, seed=20260809)
    sample = simulate_bf_m1(design, prior_a, prior_d, 20260809)
    k0 = threshold_from_alpha(sample, 0.01, "upper")
    assert k0 == pytest.approx(2.015, abs=0.1)


def test_probs_dict_is_json_ready(pair_80x8):
    m0, m1 = pair_80x8
    th = Thresholds(k0=3.0, inv_k1=1 / 3, derivation="from_alpha", alpha=0.05)
    probs = classify(m0, m1, th, pi0=0.5)
    payload = probs_to_dict(probs, th)
    text = json.dumps(payload)
    assert "thresholds" in payload and payload["thresholds"]["alpha"] == 0.05
    assert payload["se"]["p1_c"] == pytest.approx(
        math.sqrt(probs.p1_c * (1 - probs.p1_c) / probs.t_count))
    assert json.loads(text)["pi0"] == 0.5
