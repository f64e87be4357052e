"""Bias and MSE of every estimator for the 34-farm wheat population.

Run from the repository root:  python3 demos/01_wheat_table.py
"""

# %% Load the published summary moments
from pathlib import Path

import numpy as np

import multiratio as mr
from multiratio.cli import cmd_analyze, render

summary = mr.parse_summary_file((Path(__file__).parent / "wheat34_summary.json").read_text())
m = summary.moments
print("P       ", m.P)
print("C0^2    ", round(m.C0sq, 5))
print("C_i^2   ", np.round(m.Csq, 5))
print("C_0i    ", np.round(m.C0i, 5))
print("C_12    ", round(m.Cij[0, 1], 5))

# %% The sample size is not printed with the table. n = 10 is the only
# value that reproduces the single-ratio row to four significant figures.
for n in (8, 9, 10, 11, 12):
    r = mr.ratio_single(m, mr.design(34, n), 0)
    print(f"n={n:2d}  bias {r.bias:8.4f}  mse {r.mse:9.3f}")

# %% Optimal weights and the full report
sol = mr.optimal_weights(m, mr.design(34, 10))
print("w* =", sol.w.w, " lambda =", round(sol.lagrange_multiplier, 7))
print(render(cmd_analyze(m, 10, sol.w, "optimal", summary.reference)))

# %% Equal weights move the shared MSE only in the fourth decimal
d = mr.design(34, 10)
print("optimal:", mr.mse_multiattribute(m, d, sol.w))
print("equal:  ", mr.mse_multiattribute(m, d, mr.equal_weights(2)))

# %% Bias ordering diagnostics
rep = mr.bias_ordering_report(m, mr.equal_weights(2), d)
print(f"factor1 {rep.factor1:.5f}  factor2 {rep.factor2:.6f}")
print("|bias| ap, gp, hp:", np.round(rep.abs_biases, 4))
