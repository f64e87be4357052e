import numpy as np
import pytest

from multiratio import (
    SingularMomentMatrix,
    WeightVector,
    design,
    moments_from_summary,
    mse_multiattribute,
    optimal_weights,
    population_moments,
    synthetic_population,
)


def kkt_oracle(M, b):
    """Solve the bordered system [[2M, 1], [1', 0]] [w, mu] = [2b, 1]."""
    k = len(b)
    A = np.zeros((k + 1, k + 1))
    A[:k, :k] = 2 * M
    A[:k, k] = A[k, :k] = 1.0
    rhs = np.append(2 * b, 1.0)
    sol = np.linalg.solve(A, rhs)
    return sol[:k], -sol[k] / 2


def test_wheat_solution(wheat):
    sol = optimal_weights(wheat)
    np.testing.assert_allclose(sol.w.w, [0.4975, 0.5025], atol=1e-3)
    assert sol.lagrange_multiplier == pytest.approx(0.0841, abs=5e-5)
    assert abs(sol.w.w.sum() - 1) <= 1e-12
    assert not sol.negative_weights
    assert sol.mse_at_w is None


def test_against_kkt_oracle(wheat):
    w, lam = kkt_oracle(np.asarray(wheat.Cij), np.asarray(wheat.C0i))
    sol = optimal_weights(wheat)
    np.testing.assert_allclose(sol.w.w, w, rtol=1e-12)
    assert sol.lagrange_multiplier == pytest.approx(lam, rel=1e-10)


def test_kkt_oracle_general_k():
    pop = synthetic_population(60, k=4, seed=11)
    m = population_moments(pop)
    w, lam = kkt_oracle(np.asarray(m.Cij), np.asarray(m.C0i))
    sol = optimal_weights(m)
    np.testing.assert_allclose(sol.w.w, w, rtol=1e-9, atol=1e-12)
    assert sol.lagrange_multiplier == pytest.approx(lam, rel=1e-9)


def test_stationarity_residual(wheat):
    sol = optimal_weights(wheat)
    M, b = np.asarray(wheat.Cij), np.asarray(wheat.C0i)
    resid = M @ sol.w.w - b - sol.lagrange_multiplier
    assert np.linalg.norm(resid) <= 1e-10 * np.linalg.norm(b)


def test_mse_at_w(wheat):
    d = design(34, 10)
    sol = optimal_weights(wheat, d)
    assert sol.mse_at_w == mse_multiattribute(wheat, d, sol.w)


def test_single_attribute():
    m = moments_from_summary(N=20, Ybar=5.0, P=[0.4], S2y=4.0, S2phi=[0.25], rho_pb=[0.5])
    assert optimal_weights(m).w.w.tolist() == [1.0]


def test_symmetric_moments():
    m = moments_from_summary(N=40, Ybar=5.0, P=[0.4, 0.4], S2y=4.0, S2phi=[0.24, 0.24],
                             rho_pb=[0.5, 0.5], rho_phi=0.3)
    np.testing.assert_allclose(optimal_weights(m).w.w, [0.5, 0.5], atol=1e-12)


def test_negative_weights_flagged():
    # attribute 1 is noisier, barely related to y and strongly tied to attribute 2
    m = moments_from_summary(N=40, Ybar=5.0, P=[0.4, 0.5], S2y=4.0, S2phi=[0.24, 0.25],
                             rho_pb=[0.05, 0.8], rho_phi=0.9)
    sol = optimal_weights(m)
    assert sol.negative_weights
    assert abs(sol.w.w.sum() - 1) <= 1e-12


def test_singular():
    m = moments_from_summary(N=40, Ybar=5.0, P=[0.4, 0.4], S2y=4.0, S2phi=[0.24, 0.24],
                             rho_pb=[0.5, 0.5], rho_phi=1.0)
    with pytest.raises(SingularMomentMatrix) as err:
        optimal_weights(m)
    assert err.value.condition > 1e12


def test_random_perturbations_never_improve(wheat):
    d = design(34, 10)
    sol = optimal_weights(wheat)
    best = mse_multiattribute(wheat, d, sol.w)
    rng = np.random.default_rng(0)
    for _ in range(1000):
        v = rng.standard_normal(2)
        v -= v.mean()
        v *= 1e-3 / np.linalg.norm(v)
        assert mse_multiattribute(wheat, d, WeightVector(sol.w.w + v)) >= best - 1e-12


def test_line_scan(wheat):
    d = design(34, 10)
    sol = optimal_weights(wheat)
    best = mse_multiattribute(wheat, d, sol.w)
    grid = np.arange(-2.0, 3.0 + 5e-4, 1e-3)
    scan = [mse_multiattribute(wheat, d, WeightVector([w1, 1 - w1])) for w1 in grid]
    assert min(scan) >= best - 1e-9
    assert abs(grid[int(np.argmin(scan))] - sol.w.w[0]) <= 1e-3


def test_invariant_to_design_and_scale(wheat):
    ref = optimal_weights(wheat).w.w
    for n in (2, 10, 30):
        np.testing.assert_array_equal(optimal_weights(wheat, design(34, n)).w.w, ref)
    scaled = moments_from_summary(N=34, Ybar=3 * 199.4, P=wheat.P, S2y=9 * 22564.6,
                                  S2phi=wheat.S2phi, rho_pb=wheat.rho_pb, rho_phi=wheat.rho_phi)
    np.testing.assert_allclose(optimal_weights(scaled).w.w, ref, rtol=1e-12)
