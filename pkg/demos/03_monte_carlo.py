"""Monte Carlo on a 200-unit synthetic population.

The three weighted means share one first-order MSE. With 200k replicates
their empirical MSEs should agree to within a few standard errors.
"""

# %%
import math

import multiratio as mr

pop = mr.synthetic_population(200, k=2, seed=0)
m = mr.population_moments(pop)
w = mr.optimal_weights(m).w
print("P", m.P, " rho_pb", m.rho_pb, " rho_phi", round(m.rho_phi[0, 1], 3))

# %% about 3 seconds
cfg = mr.SimulationConfig(n=20, weights=w, reps=200_000, seed=1)
emp = mr.run_monte_carlo(pop, cfg)
dev = mr.compare_to_analytic(emp, m, mr.design(200, 20), w)
for r in dev.rows:
    print(f"{r.kind.token:8s} bias {r.empirical.bias:8.3f} ({r.analytic.bias:8.3f})"
          f"  mse {r.empirical.mse:9.1f} ({r.analytic.mse:9.1f})  within 3 SE: {r.within_mc}")

# %% Pairwise gaps between the three equal-MSE estimators, in SE units
kinds = [mr.EstimatorKind(t) for t in ("arithmetic", "geometric", "harmonic")]
res = [emp.result(k) for k in kinds]
for i in range(3):
    for j in range(i + 1, 3):
        z = abs(res[i].mse - res[j].mse) / math.hypot(res[i].mse_se, res[j].mse_se)
        print(kinds[i].token, kinds[j].token, round(z, 2))

# %% A replicate's sample depends only on (seed, j), not on the block it lands in
from multiratio.simulation import replicate_indices

alone = replicate_indices(200, 20, 1, 70_000, 70_001)[0]
inside = replicate_indices(200, 20, 1, 69_990, 70_010)[10]
print(alone[:8], (alone == inside).all())
