"""Choosing among per-m optima by cost, and stress-testing the design prior.

Every m has its own optimal n*, so the (n*, m) frontier leaves one degree
of freedom.  A per-subject cost c1 and per-laboratory cost c2 collapse it:
pick the pair minimising m * (c1 * n + c2).  Separately, the optimum is
sensitive to where the design prior puts the heterogeneity it wants to
detect, so a location sweep is part of due diligence.
"""

from replisize import CostSpec, FoldedT, HalfT, Priors, SimSizes, SsdTarget, cost_select, find_n_star, sweep_m

analysis = HalfT(nu=4, sigma=1 / 7)
sizes = SimSizes(s=1500, t_count=4000)
target = SsdTarget("conditional", alpha=0.05, power=0.8)
SEED = 11

priors = Priors(analysis, FoldedT(nu=4, mu=0.2, sigma=1 / 55))
results = sweep_m([3, 5, 8, 12, 16], target, priors, sizes, SEED)
print("per-m optima (power 0.8, alpha 0.05):")
for r in results:
    print(f"  m={r.m:2d}  n*={r.n_star:4d}  total subjects={r.m * r.n_star}")

cost = CostSpec(c1=1.0, c2=100.0)
best, total = cost_select(results, cost)
print(f"\nwith c1=1 per subject and c2=100 per laboratory:")
print(f"  cheapest design: n={best.n_star}, m={best.m} (cost {total:g})")

print("\ndesign-prior location sweep at m=8:")
for mu in (0.1, 0.2, 0.3):
    shifted = Priors(analysis, FoldedT(nu=4, mu=mu, sigma=1 / 55))
    r = find_n_star(8, target, shifted, sizes, master_seed=SEED)
    print(f"  expecting heterogeneity near {mu:.1f}  ->  n* = {r.n_star}")
print("aiming at smaller heterogeneity is sharply more expensive.")
