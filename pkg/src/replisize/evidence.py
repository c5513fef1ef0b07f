"""Classification of BF01 draws into correct, misleading and undetermined
evidence, and threshold derivation from target error rates.

Evidence for M0 means BF01 > k0; evidence for M1 means BF01 < 1/k1; between
the cutoffs the outcome is undetermined.  Which side counts as correct
depends on the generating model.  Both the six conditional probabilities
and the three overall probabilities (weighted by the prior model
probability pi0) are reported.
"""

import math
from dataclasses import dataclass

import numpy as np

__all__ = ["Thresholds", "EvidenceProbs", "classify", "threshold_from_alpha",
           "probs_to_dict"]


@dataclass(frozen=True)
class Thresholds:
    """Evidence cutoffs: k0 favours M0, inv_k1 (= 1/k1) favours M1.

    ``derivation`` records whether the pair was fixed directly or derived
    from an error rate alpha via predictive quantiles.  A configuration
    with inv_k1 >= k0 leaves no undetermined region; it is reportable but
    rejected by ``classify`` unless explicitly forced.
    """

    k0: float
    inv_k1: float
    derivation: str = "fixed"  # "fixed" or "from_alpha"
    alpha: float | None = None

    def __post_init__(self):
        if not self.k0 > 0:
            raise ValueError(f"k0 must be positive, got {self.k0}")
        if not self.inv_k1 > 0 or not math.isfinite(self.inv_k1):
            raise ValueError(f"inv_k1 must be positive and finite, got {self.inv_k1}")
        if self.derivation not in ("fixed", "from_alpha"):
            raise ValueError(f"unknown derivation {self.derivation!r}")

    @property
    def degenerate(self):
        return self.inv_k1 >= self.k0


@dataclass(frozen=True)
class EvidenceProbs:
    """Conditional and overall probabilities of correct (c), misleading (m)
    and undetermined (u) evidence under each generating model."""

    p0_c: float
    p0_m: float
    p0_u: float
    p1_c: float
    p1_m: float
    p1_u: float
    p_c: float
    p_m: float
    p_u: float
    pi0: float
    t_count: int


def classify(sample_m0, sample_m1, th, pi0, *, force=False):
    """Empirical evidence probabilities of two predictive samples.

    Cutoffs are compared strictly, so a draw exactly equal to either
    threshold counts as undetermined.  ``pi0`` weights the overall triple;
    the conditional triples do not depend on it.

    Degenerate thresholds (inv_k1 >= k0) are rejected unless ``force`` is
    given.  When forced, only unambiguous draws count as evidence: above
    max(k0, inv_k1) favours M0, below min(k0, inv_k1) favours M1, and the
    overlap stays undetermined.  For non-degenerate thresholds this is
    identical to the plain definition.
    """
    if sample_m0.design != sample_m1.design:
        raise ValueError(
            f"design mismatch: {sample_m0.design} vs {sample_m1.design}")
    if sample_m0.model != "M0" or sample_m1.model != "M1":
        raise ValueError("classify expects an M0 sample and an M1 sample, in that order")
    if not 0.0 <= pi0 <= 1.0:
        raise ValueError(f"pi0 must lie in [0, 1], got {pi0}")
    if th.degenerate and not force:
        raise ValueError(
            f"degenerate thresholds (inv_k1={th.inv_k1} >= k0={th.k0}) leave no "
            "undetermined region; pass force=True to classify anyway")

    log_hi = np.log(max(th.k0, th.inv_k1))
    log_lo = np.log(min(th.k0, th.inv_k1))

    def triple(values, favours_truth):
        t = values.size
        above = int(np.count_nonzero(values > log_hi))
        below = int(np.count_nonzero(values < log_lo))
        undet = t - above - below
        correct, misleading = (above, below) if favours_truth == "M0" else (below, above)
        return correct / t, misleading / t, undet / t

    p0_c, p0_m, p0_u = triple(sample_m0.values, "M0")
    p1_c, p1_m, p1_u = triple(sample_m1.values, "M1")
    pi1 = 1.0 - pi0
    return EvidenceProbs(
        p0_c=p0_c, p0_m=p0_m, p0_u=p0_u,
        p1_c=p1_c, p1_m=p1_m, p1_u=p1_u,
        p_c=pi0 * p0_c + pi1 * p1_c,
        p_m=pi0 * p0_m + pi1 * p1_m,
        p_u=pi0 * p0_u + pi1 * p1_u,
        pi0=pi0,
        t_count=sample_m0.t_count,
    )


def _nearest_rank(p, t):
    # ceil(p*t) with a guard against floating noise pushing an exact
    # integer product over the next rank
    rank = math.ceil(p * t - 1e-9)
    return min(max(rank, 1), t)


def threshold_from_alpha(sample, alpha, side):
    """Evidence cutoff pinning a tail of the predictive BF01 distribution.

    side="lower": returns 1/k1 as the alpha-quantile of BF01 in the sample
    (by construction P(BF01 < 1/k1) = alpha up to one empirical-quantile
    step).  side="upper": returns k0 as the (1-alpha)-quantile.  Empirical
    quantile is nearest-rank, i.e. the ceil(p*T)-th order statistic.
    """
    if not 0.0 < alpha < 0.5:
        raise ValueError(f"alpha must lie in (0, 0.5), got {alpha}")
    if side not in ("lower", "upper"):
        raise ValueError(f"side must be 'lower' or 'upper', got {side!r}")
    values = np.sort(sample.values)
    p = alpha if side == "lower" else 1.0 - alpha
    rank = _nearest_rank(p, values.size)
    return float(np.exp(values[rank - 1]))


def probs_to_dict(probs, thresholds=None):
    """JSON-ready dict with all nine probabilities, pi0, thresholds and
    binomial Monte Carlo standard errors."""
    t = probs.t_count

    def se(p):
        return math.sqrt(p * (1.0 - p) / t)

    names = ["p0_c", "p0_m", "p0_u", "p1_c", "p1_m", "p1_u", "p_c", "p_m", "p_u"]
    out = {name: getattr(probs, name) for name in names}
    out["pi0"] = probs.pi0
    out["t_count"] = t
    out["se"] = {name: se(getattr(probs, name)) for name in names}
    if thresholds is not None:
        out["thresholds"] = {
            "k0": thresholds.k0 if math.isfinite(thresholds.k0) else None,
            "inv_k1": thresholds.inv_k1,
            "derivation": thresholds.derivation,
            "alpha": thresholds.alpha,
            "degenerate": thresholds.degenerate,
        }
    return out
