"""Prior and driver distributions for the heterogeneity design calculations.

Three families cover everything the package needs:

* ``HalfT`` -- weakly informative analysis prior on the relative
  heterogeneity gamma = tau/sigma (absolute value of a scaled Student-t
  centred at zero).
* ``FoldedT`` -- informative design prior on gamma (absolute value of a
  location/scale Student-t); reduces to ``HalfT`` when the location is 0.
* ``ChiSquared`` -- sampling distribution of the dispersion statistic Q
  under the no-heterogeneity model.

All objects are immutable and safe to share across threads.  Sampling
always takes an explicit seed or Generator; there is no hidden global RNG.
"""

from dataclasses import dataclass

import numpy as np
from scipy import optimize, stats

from .seeding import as_generator

__all__ = ["HalfT", "FoldedT", "ChiSquared", "prior_from_dict", "prior_to_dict"]


def _validate_count(count):
    if count < 1:
        raise ValueError(f"sample count must be >= 1, got {count}")


def _quantile_by_root(dist, p):
    """Invert dist.cdf by bracketing + Brent to absolute tolerance 1e-8."""
    if not 0.0 < p < 1.0:
        raise ValueError(f"quantile probability must lie in (0, 1), got {p}")
    hi = dist._tail_bound()
    while dist.cdf(hi) < p:
        hi *= 2.0
    return float(optimize.brentq(lambda x: dist.cdf(x) - p, 0.0, hi, xtol=1e-8))


@dataclass(frozen=True)
class HalfT:
    """Absolute value of a Student-t variate centred at zero.

    parameters
    ----------
    nu: float
        Degrees of freedom, > 0.  Small values give a heavy upper tail.
    sigma: float
        Scale, > 0.  Dimensionless here because gamma is a ratio of
        standard deviations.
    """

    nu: float
    sigma: float

    def __post_init__(self):
        if self.nu <= 0:
            raise ValueError(f"nu must be positive, got {self.nu}")
        if self.sigma <= 0:
            raise ValueError(f"sigma must be positive, got {self.sigma}")

    def pdf(self, x):
        x = np.asarray(x, dtype=float)
        out = np.where(x < 0, 0.0, 2.0 * stats.t.pdf(x / self.sigma, self.nu) / self.sigma)
        return out if out.ndim else float(out)

    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        out = np.where(x < 0, 0.0, 2.0 * stats.t.cdf(x / self.sigma, self.nu) - 1.0)
        return out if out.ndim else float(out)

    def sample(self, count, rng):
        """Draw ``count`` values as |sigma * T_nu|; reproducible given the seed."""
        _validate_count(count)
        rng = as_generator(rng)
        return np.abs(self.sigma * rng.standard_t(self.nu, size=count))

    def quantile(self, p):
        return _quantile_by_root(self, p)

    def _tail_bound(self):
        return 50.0 * self.sigma


@dataclass(frozen=True)
class FoldedT:
    """Absolute value of a Student-t variate with location mu and scale sigma.

    With mu = 0 this is pointwise identical to ``HalfT`` of the same nu and
    sigma.
    """

    nu: float
    mu: float
    sigma: float

    def __post_init__(self):
        if self.nu <= 0:
            raise ValueError(f"nu must be positive, got {self.nu}")
        if self.sigma <= 0:
            raise ValueError(f"sigma must be positive, got {self.sigma}")
        if self.mu < 0:
            raise ValueError(f"mu must be nonnegative, got {self.mu}")

    def pdf(self, x):
        x = np.asarray(x, dtype=float)
        lo = stats.t.pdf((x - self.mu) / self.sigma, self.nu)
        hi = stats.t.pdf((x + self.mu) / self.sigma, self.nu)
        out = np.where(x < 0, 0.0, (lo + hi) / self.sigma)
        return out if out.ndim else float(out)

    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        # P(|mu + sigma*T| <= x) = F_T((x-mu)/sigma) - F_T((-x-mu)/sigma)
        upper = stats.t.cdf((x - self.mu) / self.sigma, self.nu)
        lower = stats.t.cdf((-x - self.mu) / self.sigma, self.nu)
        out = np.where(x < 0, 0.0, upper - lower)
        return out if out.ndim else float(out)

    def sample(self, count, rng):
        """Draw ``count`` values as |mu + sigma * T_nu|."""
        _validate_count(count)
        rng = as_generator(rng)
        return np.abs(self.mu + self.sigma * rng.standard_t(self.nu, size=count))

    def quantile(self, p):
        return _quantile_by_root(self, p)

    def _tail_bound(self):
        # Student-t tails decay polynomially; 50 scales out is far past
        # anything the quantile routine is asked for.
        return self.mu + 50.0 * self.sigma


@dataclass(frozen=True)
class ChiSquared:
    """Chi-squared with integer degrees of freedom (here df = m - 1)."""

    df: int

    def __post_init__(self):
        if int(self.df) != self.df or self.df < 1:
            raise ValueError(f"df must be a positive integer, got {self.df}")

    def pdf(self, x):
        x = np.asarray(x, dtype=float)
        out = stats.chi2.pdf(x, self.df)
        return out if out.ndim else float(out)

    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        out = stats.chi2.cdf(x, self.df)
        return out if out.ndim else float(out)

    def sample(self, count, rng):
        _validate_count(count)
        rng = as_generator(rng)
        return rng.chisquare(self.df, size=count)

    @property
    def mean(self):
        return float(self.df)


def prior_to_dict(prior):
    """JSON-ready description: {"family", "nu", "mu", "sigma"} (mu only if folded)."""
    if isinstance(prior, HalfT):
        return {"family": "half_t", "nu": prior.nu, "sigma": prior.sigma}
    if isinstance(prior, FoldedT):
        return {"family": "folded_t", "nu": prior.nu, "mu": prior.mu, "sigma": prior.sigma}
    raise TypeError(f"not a prior distribution: {prior!r}")


def prior_from_dict(spec):
    """Build a HalfT or FoldedT from its JSON object form."""
    try:
        family = spec["family"]
    except (TypeError, KeyError):
        raise ValueError("prior specification must be an object with a 'family' key")
    if family == "half_t":
        if spec.get("mu", 0) not in (0, 0.0):
            raise ValueError("half_t priors have no location; use folded_t")
        return HalfT(nu=float(spec["nu"]), sigma=float(spec["sigma"]))
    if family == "folded_t":
        return FoldedT(nu=float(spec["nu"]), mu=float(spec.get("mu", 0.0)),
                       sigma=float(spec["sigma"]))
    raise ValueError(f"unknown prior family {family!r} (expected 'half_t' or 'folded_t')")
