"""Optimal weights: where they come from and when they go negative."""

# %%
import numpy as np

import multiratio as mr

m = mr.load_wheat34().moments
d = mr.design(34, 10)
sol = mr.optimal_weights(m, d)
print("w*", sol.w.w, " cond", round(sol.condition_estimate, 2))

# %% Scan the one free direction: the MSE is a parabola with its floor at w*
for w1 in np.linspace(0.3, 0.7, 9):
    print(f"w1={w1:.2f}  mse {mr.mse_multiattribute(m, d, mr.WeightVector([w1, 1 - w1])):10.4f}")

# %% Weakly related second attribute, strongly correlated with the first
m2 = mr.moments_from_summary(N=100, Ybar=50.0, P=[0.4, 0.5], S2y=400.0,
                             S2phi=[0.24, 0.25], rho_pb=[0.05, 0.8], rho_phi=0.9)
neg = mr.optimal_weights(m2)
print("w*", neg.w.w, " negative:", neg.negative_weights)

# %% Perfectly correlated attributes leave the weights undetermined
try:
    mr.optimal_weights(mr.moments_from_summary(N=50, Ybar=10.0, P=[0.5, 0.5], S2y=4.0,
                                               S2phi=[0.25, 0.25], rho_pb=[0.4, 0.4], rho_phi=1.0))
except mr.SingularMomentMatrix as exc:
    print("singular:", exc)
