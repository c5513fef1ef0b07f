"""Optimal per-site sample size n* for a given number of sites m.

The conditional criterion asks for the smallest n whose probability of
correct evidence for heterogeneity reaches the target power, while the
misleading rate under no heterogeneity is pinned to alpha by deriving
1/k1 as a predictive quantile.  The unconditional criterion applies the
same structure to the overall (model-averaged) probabilities, deriving k0
from the predictive distribution under heterogeneity as well.

All Monte Carlo inputs for one search are drawn once from the master seed
(common random numbers), which makes the criterion gap a deterministic and
empirically monotone function of n; the search is a Regula Falsi bracket
refinement rounded to integers, with a bisection fallback against
stalling.
"""

import logging
import math
import time
from dataclasses import dataclass

from .bayes_factor import AnalysisPriorSample, log_bf01
from .distributions import ChiSquared
from .evidence import Thresholds, classify, threshold_from_alpha
from .model import DesignPoint
from .predictive import DesignPriorSample, LogBfSample
from .seeding import STREAM_PREDICTIVE, STREAM_SWEEP, derive_seed, substream

__all__ = [
    "SsdTarget",
    "CostSpec",
    "SearchConfig",
    "Priors",
    "SimSizes",
    "GapEval",
    "SsdResult",
    "InfeasibleTargetError",
    "criterion_gap",
    "find_n_star",
    "sweep_m",
    "cost_select",
    "RESULT_COLUMNS",
    "result_to_row",
]

log = logging.getLogger(__name__)


class InfeasibleTargetError(RuntimeError):
    """The bracket search hit its cap without reaching the target."""

    def __init__(self, m, n_max, last_gap):
        self.m = m
        self.n_max = n_max
        self.last_gap = last_gap
        super().__init__(
            f"target not reachable for m={m} within n <= {n_max} "
            f"(gap at cap: {last_gap:+.4f})")


@dataclass(frozen=True)
class SsdTarget:
    """Design goal: error rate alpha, power 1-beta, and (unconditional
    mode only) the prior probability pi0 of the no-heterogeneity model."""

    mode: str  # "conditional" or "unconditional"
    alpha: float
    power: float
    pi0: float = 0.5

    def __post_init__(self):
        if self.mode not in ("conditional", "unconditional"):
            raise ValueError(f"mode must be 'conditional' or 'unconditional', "
                             f"got {self.mode!r}")
        if not 0.0 < self.alpha < 0.5:
            raise ValueError(f"alpha must lie in (0, 0.5), got {self.alpha}")
        if not 0.5 < self.power < 1.0:
            raise ValueError(f"power must lie in (0.5, 1), got {self.power}")
        if not 0.0 <= self.pi0 <= 1.0:
            raise ValueError(f"pi0 must lie in [0, 1], got {self.pi0}")


@dataclass(frozen=True)
class CostSpec:
    """Per-subject cost c1 and per-laboratory cost c2."""

    c1: float
    c2: float

    def __post_init__(self):
        if self.c1 < 0 or self.c2 < 0:
            raise ValueError("costs must be nonnegative")
        if self.c1 == 0 and self.c2 == 0:
            raise ValueError("at least one cost component must be positive")

    def total(self, n, m):
        return m * (self.c1 * n + self.c2)


@dataclass(frozen=True)
class SearchConfig:
    n_init: int = 10
    n_max: int = 10**6

    def __post_init__(self):
        if self.n_init < 1 or self.n_max < self.n_init:
            raise ValueError("need 1 <= n_init <= n_max")


@dataclass(frozen=True)
class Priors:
    analysis: object
    design: object


@dataclass(frozen=True)
class SimSizes:
    s: int = 10_000
    t_count: int = 50_000

    def __post_init__(self):
        if self.s < 1 or self.t_count < 1:
            raise ValueError("simulation sizes must be positive")


@dataclass(frozen=True)
class GapEval:
    """Criterion gap at one n, plus the thresholds and probabilities it used."""

    n: int
    gap: float
    thresholds: Thresholds
    probs: object


@dataclass(frozen=True)
class SsdResult:
    m: int
    n_star: int
    thresholds: Thresholds
    probs: object
    evaluations: int
    seed: int


class _GapEvaluator:
    """Shared-draw evaluation of the criterion gap across candidate n.

    The analysis-prior sample, design-prior sample and chi-squared driver
    are drawn once from the master seed; every candidate n reuses them, so
    gap(n) is a deterministic function of n.  Evaluations are cached.
    """

    def __init__(self, m, target, priors, sim_sizes, master_seed, workers=1):
        if m < 3:
            raise ValueError(f"sample size searches need m >= 3, got m={m}")
        self.m = m
        self.target = target
        self.workers = workers
        self.seed = int(master_seed)
        self.prior_a = AnalysisPriorSample.draw(priors.analysis, sim_sizes.s,
                                                master_seed)
        self.prior_d = DesignPriorSample.draw(priors.design, sim_sizes.t_count,
                                              master_seed)
        chi2 = ChiSquared(m - 1)
        self.q_base = chi2.sample(sim_sizes.t_count, substream(master_seed,
                                                               STREAM_PREDICTIVE))
        self._scale = self.prior_d.gammas**2
        self.cache = {}

    def __call__(self, n):
        if n not in self.cache:
            self.cache[n] = self._evaluate(int(n))
        return self.cache[n]

    def _evaluate(self, n):
        design = DesignPoint(n=n, m=self.m)
        t_count = self.q_base.size
        seeds = (self.seed, STREAM_PREDICTIVE)
        lb0 = log_bf01(self.q_base, design, self.prior_a, workers=self.workers)
        lb1 = log_bf01(self.q_base * (1.0 + n * self._scale), design,
                       self.prior_a, workers=self.workers)
        sample0 = LogBfSample(values=lb0, model="M0", design=design,
                              s=self.prior_a.s, t_count=t_count, seeds=seeds)
        sample1 = LogBfSample(values=lb1, model="M1", design=design,
                              s=self.prior_a.s, t_count=t_count, seeds=seeds)

        alpha = self.target.alpha
        inv_k1 = threshold_from_alpha(sample0, alpha, "lower")
        if self.target.mode == "conditional":
            th = Thresholds(k0=math.inf, inv_k1=inv_k1,
                            derivation="from_alpha", alpha=alpha)
        else:
            k0 = threshold_from_alpha(sample1, alpha, "upper")
            th = Thresholds(k0=k0, inv_k1=inv_k1,
                            derivation="from_alpha", alpha=alpha)
        # force=True: during a search the cutoffs act as mere test
        # statistics, and transient degenerate pairs at small n are
        # expected; the flag stays visible on the returned thresholds
        probs = classify(sample0, sample1, th, self.target.pi0, force=True)
        achieved = probs.p1_c if self.target.mode == "conditional" else probs.p_c
        return GapEval(n=n, gap=achieved - self.target.power,
                       thresholds=th, probs=probs)


def criterion_gap(n, m, target, priors, sim_sizes, master_seed, *, workers=1):
    """Gap between achieved and targeted probability of correct evidence at
    one candidate n.  Nonnegative means the design criterion is met."""
    evaluator = _GapEvaluator(m, target, priors, sim_sizes, master_seed,
                              workers=workers)
    return evaluator(n)


def find_n_star(m, target, priors, sim_sizes, search_cfg=None, master_seed=0, *,
                workers=1):
    """Smallest n meeting the design criterion for m sites.

    Brackets the sign change of the gap by doubling (or halving) from
    n_init, then shrinks the bracket by integer-rounded Regula Falsi
    interpolation, falling back to bisection when the same endpoint is
    replaced twice in a row.  Terminates when the bracket has width 1.
    """
    cfg = search_cfg or SearchConfig()
    gap = _GapEvaluator(m, target, priors, sim_sizes, master_seed,
                        workers=workers)

    lo_eval = gap(cfg.n_init)
    if lo_eval.gap >= 0:
        hi_eval = lo_eval
        while hi_eval.n > 1:
            cand = gap(hi_eval.n // 2)
            if cand.gap < 0:
                lo_eval = cand
                break
            hi_eval = cand
        else:
            return _result(m, hi_eval, gap, master_seed)
    else:
        while True:
            n_next = min(2 * lo_eval.n, cfg.n_max)
            hi_eval = gap(n_next)
            if hi_eval.gap >= 0:
                break
            if n_next >= cfg.n_max:
                raise InfeasibleTargetError(m, cfg.n_max, hi_eval.gap)
            lo_eval = hi_eval

    last_side, repeats = 0, 0
    while hi_eval.n - lo_eval.n > 1:
        if repeats >= 2:
            cand_n = (lo_eval.n + hi_eval.n) // 2
            repeats = 0
        else:
            frac = lo_eval.n - lo_eval.gap * (hi_eval.n - lo_eval.n) / (
                hi_eval.gap - lo_eval.gap)
            cand_n = min(max(round(frac), lo_eval.n + 1), hi_eval.n - 1)
        cand = gap(cand_n)
        side = 1 if cand.gap >= 0 else -1
        if side > 0:
            hi_eval = cand
        else:
            lo_eval = cand
        repeats = repeats + 1 if side == last_side else 1
        last_side = side
    return _result(m, hi_eval, gap, master_seed)


def _result(m, final_eval, evaluator, master_seed):
    return SsdResult(m=m, n_star=final_eval.n, thresholds=final_eval.thresholds,
                     probs=final_eval.probs, evaluations=len(evaluator.cache),
                     seed=int(master_seed))


def sweep_m(m_values, target, priors, sim_sizes, master_seed, *,
            search_cfg=None, workers=1):
    """find_n_star for each m, with an independent per-m seed derivation.

    Results come back ordered by m.  An infeasible m is reported via the
    module logger and skipped; the sweep continues.
    """
    results = []
    for m in sorted(m_values):
        seed_m = derive_seed(master_seed, STREAM_SWEEP, m)
        started = time.perf_counter()
        try:
            result = find_n_star(m, target, priors, sim_sizes,
                                 search_cfg=search_cfg, master_seed=seed_m,
                                 workers=workers)
        except InfeasibleTargetError as err:
            log.warning("m=%d: %s", m, err)
            continue
        elapsed = time.perf_counter() - started
        log.info("m=%d: n*=%d after %d evaluations (%.1f s)",
                 m, result.n_star, result.evaluations, elapsed)
        results.append(result)
    return results


def cost_select(results, cost):
    """Cheapest design among per-m optima under total cost m*(c1*n + c2).

    Ties break toward fewer sites, then fewer subjects per site.
    """
    if not results:
        raise ValueError("no results to select from")
    best = min(results, key=lambda r: (cost.total(r.n_star, r.m), r.m, r.n_star))
    return best, cost.total(best.n_star, best.m)


RESULT_COLUMNS = [
    "m", "n_star", "inv_k1", "k0",
    "p0_c", "p0_m", "p0_u", "p1_c", "p1_m", "p1_u", "p_c", "p_m", "p_u",
    "evaluations", "seed",
]


def result_to_row(result):
    """Flatten an SsdResult into the tabular schema (k0 empty when the
    conditional criterion left it unset)."""
    th, probs = result.thresholds, result.probs
    return {
        "m": result.m,
        "n_star": result.n_star,
        "inv_k1": th.inv_k1,
        "k0": th.k0 if math.isfinite(th.k0) else None,
        "p0_c": probs.p0_c, "p0_m": probs.p0_m, "p0_u": probs.p0_u,
        "p1_c": probs.p1_c, "p1_m": probs.p1_m, "p1_u": probs.p1_u,
        "p_c": probs.p_c, "p_m": probs.p_m, "p_u": probs.p_u,
        "evaluations": result.evaluations,
        "seed": result.seed,
    }
