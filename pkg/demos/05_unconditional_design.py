"""Unconditional sample size determination.

Here the criterion averages over model uncertainty: with prior model
probabilities pi0 = pi1 = 0.5, the overall probability of correct evidence
must reach the power target while both misleading rates are pinned to
alpha via two calibrated cutoffs (1/k1 from the M0 predictive, k0 from the
M1 predictive).  This is stricter than the conditional criterion and needs
more subjects.
"""

from replisize import FoldedT, HalfT, Priors, SimSizes, SsdTarget, find_n_star

priors = Priors(
    analysis=HalfT(nu=4, sigma=1 / 7),
    design=FoldedT(nu=4, mu=0.2, sigma=1 / 55),
)
sizes = SimSizes(s=2000, t_count=5000)

for mode in ("conditional", "unconditional"):
    target = SsdTarget(mode, alpha=0.01, power=0.8, pi0=0.5)
    result = find_n_star(8, target, priors, sizes, master_seed=424242)
    th = result.thresholds
    k0 = f"k0={th.k0:.3f}" if mode == "unconditional" else "k0 unused"
    print(f"{mode:14s}: n* = {result.n_star:4d}   1/k1={th.inv_k1:.3f}   {k0}")

print("\nthe unconditional design is larger because it also has to deliver")
print("correct evidence when the no-heterogeneity model is the true one.")
