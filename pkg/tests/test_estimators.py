import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from multiratio import (
    EstimatorKind,
    NonPositiveRatio,
    ValidationError,
    WeightVector,
    ZeroProportion,
    est_geometric,
    est_harmonic,
    est_mean,
    est_olkin_arithmetic,
    est_product_singh,
    est_ratio_single,
    evaluate,
    evaluate_batch,
    stats_from_values,
)
from multiratio.weights import equal_weights

HALF = WeightVector([0.5, 0.5])
P_HALF = [0.5, 0.5]


@pytest.fixture
def s2():
    # ybar = 3, p = (1, 0.5): ratio terms are 1.5 and 3
    return stats_from_values(3.0, [1.0, 0.5])


class TestWeightVector:
    def test_sum_enforced(self):
        with pytest.raises(ValidationError):
            WeightVector([0.5, 0.6])

    def test_negative_allowed(self):
        assert not WeightVector([1.5, -0.5]).nonnegative

    @pytest.mark.parametrize("k", [1, 2, 4])
    def test_equal(self, k):
        np.testing.assert_array_equal(equal_weights(k).w, np.full(k, 1 / k))


class TestKind:
    @pytest.mark.parametrize("token", ["mean", "ratio:1", "ratio:3", "ap", "gp", "hp", "ts"])
    def test_round_trip(self, token):
        assert EstimatorKind.parse(token).token == token

    @pytest.mark.parametrize("token", ["ratio:0", "xx", "ratio"])
    def test_bad(self, token):
        with pytest.raises(ValidationError):
            EstimatorKind.parse(token)

    def test_index_beyond_k(self, s2):
        with pytest.raises(ValidationError):
            evaluate(EstimatorKind("ratio", 2), s2, P_HALF)


class TestWorkedValues:
    def test_mean(self, s2):
        assert est_mean(s2) == 3.0

    def test_ratio(self):
        s = stats_from_values(3.0, [1.0])
        assert est_ratio_single(s, [0.5], 0) == 1.5

    def test_ratio_self_calibrated(self):
        s = stats_from_values(3.7, [0.4])
        assert est_ratio_single(s, [0.4], 0) == 3.7

    def test_arithmetic(self, s2):
        assert est_olkin_arithmetic(s2, P_HALF, HALF) == pytest.approx(0.5 * 1.5 + 0.5 * 3)
        assert est_olkin_arithmetic(s2, P_HALF, HALF) == pytest.approx(2.25, rel=1e-15)

    def test_geometric(self, s2):
        assert est_geometric(s2, P_HALF, HALF) == pytest.approx(np.sqrt(1.5 * 3), rel=1e-14)
        assert est_geometric(s2, P_HALF, HALF) == pytest.approx(2.1213, abs=5e-5)

    def test_harmonic(self, s2):
        assert est_harmonic(s2, P_HALF, HALF) == pytest.approx(1 / (0.5 / 1.5 + 0.5 / 3), rel=1e-15)
        assert est_harmonic(s2, P_HALF, HALF) == pytest.approx(2.0, rel=1e-15)

    def test_product(self, s2):
        assert est_product_singh(s2, P_HALF) == pytest.approx(3 * 0.5 * 1, rel=1e-15)

    def test_product_self_calibrated(self):
        s = stats_from_values(4.2, [0.3, 0.8])
        assert est_product_singh(s, [0.3, 0.8]) == 4.2

    def test_all_calibrated_gives_ybar(self):
        s = stats_from_values(5.5, [0.3, 0.6, 0.9])
        for fn in (est_olkin_arithmetic, est_geometric, est_harmonic):
            assert fn(s, [0.3, 0.6, 0.9], WeightVector([0.2, 0.3, 0.5])) == 5.5

    def test_k1_collapse(self):
        s = stats_from_values(2.7, [0.3])
        ref = est_ratio_single(s, [0.45], 0)
        one = WeightVector([1.0])
        assert est_olkin_arithmetic(s, [0.45], one) == ref
        assert est_geometric(s, [0.45], one) == ref
        assert est_harmonic(s, [0.45], one) == ref
        assert est_product_singh(s, [0.45]) == ref


class TestGuards:
    def test_zero_proportion_names_attribute(self):
        s = stats_from_values(3.0, [0.5, 0.0])
        with pytest.raises(ZeroProportion) as err:
            est_olkin_arithmetic(s, P_HALF, HALF)
        assert err.value.attributes == (1,)
        assert "phi2" in str(err.value)

    def test_ratio_ignores_other_attributes(self):
        s = stats_from_values(3.0, [0.5, 0.0])
        assert est_ratio_single(s, P_HALF, 0) == 3.0
        with pytest.raises(ZeroProportion):
            est_ratio_single(s, P_HALF, 1)

    def test_geometric_nonpositive(self):
        s = stats_from_values(-1.0, [0.5, 0.5])
        with pytest.raises(NonPositiveRatio):
            est_geometric(s, P_HALF, HALF)

    def test_batch_flags_undefined(self):
        ybar = np.array([3.0, 3.0])
        p = np.array([[1.0, 0.5], [0.0, 0.5]])
        vals, ok = evaluate_batch(EstimatorKind("harmonic"), ybar, p, P_HALF, HALF)
        assert ok.tolist() == [True, False]
        assert vals[0] == pytest.approx(2.0) and np.isnan(vals[1])

    def test_negative_weights_evaluate(self, s2):
        w = WeightVector([1.5, -0.5])
        assert est_olkin_arithmetic(s2, P_HALF, w) == pytest.approx(1.5 * 1.5 - 0.5 * 3)
        assert est_harmonic(s2, P_HALF, w) == pytest.approx(1 / (1.5 / 1.5 - 0.5 / 3))


# -- properties -------------------------------------------------------------

k_st = st.integers(1, 5)


@st.composite
def cases(draw, nonneg=True):
    k = draw(k_st)
    ybar = draw(st.floats(1e-3, 1e4))
    p = draw(st.lists(st.floats(1e-3, 1.0), min_size=k, max_size=k))
    P = draw(st.lists(st.floats(1e-3, 0.999), min_size=k, max_size=k))
    raw = draw(st.lists(st.floats(0.0, 1.0), min_size=k, max_size=k))
    assume(sum(raw) > 1e-6)
    w = np.array(raw) / sum(raw)
    w[-1] = 1.0 - w[:-1].sum()
    assume(w[-1] >= 0)
    return stats_from_values(ybar, p), np.array(P), WeightVector(w)


@settings(max_examples=300)
@given(cases())
def test_weighted_mean_ordering(case):
    s, P, w = case
    h = est_harmonic(s, P, w)
    g = est_geometric(s, P, w)
    a = est_olkin_arithmetic(s, P, w)
    assert h <= g <= a


@settings(max_examples=100)
@given(cases(), st.floats(1e-3, 1e3))
def test_scale_equivariance(case, c):
    s, P, w = case
    sc = stats_from_values(c * s.ybar, s.p)
    for kind in (EstimatorKind("mean"), EstimatorKind("ratio", 0), EstimatorKind("arithmetic"),
                 EstimatorKind("geometric"), EstimatorKind("harmonic"), EstimatorKind("product")):
        assert evaluate(kind, sc, P, w) == pytest.approx(c * evaluate(kind, s, P, w), rel=1e-12)


@settings(max_examples=100)
@given(cases(), st.randoms(use_true_random=False))
def test_permutation_symmetry(case, rnd):
    s, P, w = case
    perm = list(range(P.size))
    rnd.shuffle(perm)
    sp = stats_from_values(s.ybar, s.p[perm])
    wp = WeightVector(w.w[perm] + (1 - w.w[perm].sum()) / P.size)
    for kind in ("arithmetic", "geometric", "harmonic"):
        a = evaluate(EstimatorKind(kind), s, P, w)
        b = evaluate(EstimatorKind(kind), sp, P[perm], wp)
        assert b == pytest.approx(a, rel=1e-12)
    assert est_product_singh(sp, P[perm]) == pytest.approx(est_product_singh(s, P), rel=1e-12)


@settings(max_examples=100)
@given(st.floats(1e-3, 1e4), st.floats(1e-3, 1.0), st.floats(1e-3, 0.999), st.integers(2, 5),
       st.data())
def test_identical_columns_collapse(ybar, p, P, k, data):
    raw = data.draw(st.lists(st.floats(-2.0, 2.0), min_size=k - 1, max_size=k - 1))
    w = WeightVector(np.append(raw, 1.0 - sum(raw)))
    assume(abs(w.w.sum() - 1.0) <= 1e-12)
    s = stats_from_values(ybar, [p] * k)
    ref = est_ratio_single(s, [P] * k, 0)
    assert est_olkin_arithmetic(s, [P] * k, w) == ref
    assert est_geometric(s, [P] * k, w) == ref
    assert est_harmonic(s, [P] * k, w) == ref
