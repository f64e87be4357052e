"""First-order bias and MSE of each estimator under SRSWOR.

All results are linear in the finite-population factor ``f``. Double sums
over attribute pairs run over unordered pairs ``i < j``. The arithmetic,
geometric and harmonic estimators share a single MSE expression
(:func:`mse_multiattribute`); only their biases differ.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ValidationError
from .estimators import EstimatorKind, WeightVector
from .population import PopulationMoments, SampleDesign


@dataclass(frozen=True)
class BiasMse:
    bias: float
    mse: float


@dataclass(frozen=True)
class OrderingReport:
    """Bias-ordering diagnostics for the arithmetic/geometric/harmonic trio.

    ``factor1`` and ``factor2`` are the two factors of the squared-bias
    comparison between arithmetic and geometric estimators, in the published
    form. ``exact_difference`` is ``|B_ap|^2 - |B_gp|^2`` divided by
    ``(f * Ybar)^2`` and is what actually decides the ordering; it equals
    ``factor2 * (factor1 - pair_sum)``. ``abs_biases`` are ``(|B_ap|, |B_gp|,
    |B_hp|)`` in units of ``f * Ybar`` unless a design was supplied.
    """

    factor1: float
    factor2: float
    predicted_ordering_holds: bool
    exact_difference: float
    abs_biases: tuple
    observed_ap_gt_gp: bool
    observed_gp_gt_hp: bool

    @property
    def observed_full_ordering(self) -> bool:
        return self.observed_ap_gt_gp and self.observed_gp_gt_hp


def _w(m: PopulationMoments, w: WeightVector) -> np.ndarray:
    if w.k != m.k:
        raise ValidationError(f"expected {m.k} weights, got {w.k}")
    return w.w


def _pair_sum(m: PopulationMoments, w) -> float:
    """sum_{i<j} w_i w_j C_ij"""
    iu = np.triu_indices(m.k, k=1)
    return float(np.sum(w[iu[0]] * w[iu[1]] * m.Cij[iu]))


# The bracketed parts (everything multiplying f * Ybar or f * Ybar^2) are kept
# separate so the ordering diagnostics can reuse them without a design.


def _bracket_arithmetic(m, w):
    return float(np.sum(w * m.Csq) - np.sum(w * m.C0i))


def _bracket_geometric(m, w):
    return float(np.sum(w * (w + 1) * m.Csq) / 2 + _pair_sum(m, w) - np.sum(w * m.C0i))


def _bracket_harmonic(m, w):
    return float(np.sum(w**2 * m.Csq) + 2 * _pair_sum(m, w) - np.sum(w * m.C0i))


def _bracket_mse(m, w):
    return float(m.C0sq + np.sum(w**2 * m.Csq) + 2 * _pair_sum(m, w) - 2 * np.sum(w * m.C0i))


def mse_sample_mean(m: PopulationMoments, d: SampleDesign) -> float:
    """``f * Ybar^2 * C0^2``, i.e. ``f * S_y^2``."""
    return d.f * m.Ybar**2 * m.C0sq


def bias_arithmetic(m: PopulationMoments, d: SampleDesign, w: WeightVector) -> float:
    return d.f * m.Ybar * _bracket_arithmetic(m, _w(m, w))


def bias_geometric(m: PopulationMoments, d: SampleDesign, w: WeightVector) -> float:
    return d.f * m.Ybar * _bracket_geometric(m, _w(m, w))


def bias_harmonic(m: PopulationMoments, d: SampleDesign, w: WeightVector) -> float:
    return d.f * m.Ybar * _bracket_harmonic(m, _w(m, w))


def mse_multiattribute(m: PopulationMoments, d: SampleDesign, w: WeightVector) -> float:
    """Common first-order MSE of the arithmetic, geometric and harmonic estimators."""
    return d.f * m.Ybar**2 * _bracket_mse(m, _w(m, w))


def _single(m, i):
    if not 0 <= i < m.k:
        raise ValidationError(f"attribute index {i} out of range for k={m.k}")
    return m.subset([i]), WeightVector([1.0])


def bias_ratio_single(m: PopulationMoments, d: SampleDesign, i: int) -> float:
    """``f * Ybar * (C_i^2 - C_0i)`` for attribute ``i`` (zero-based)."""
    mi, one = _single(m, i)
    return bias_arithmetic(mi, d, one)


def mse_ratio_single(m: PopulationMoments, d: SampleDesign, i: int) -> float:
    mi, one = _single(m, i)
    return mse_multiattribute(mi, d, one)


def ratio_single(m: PopulationMoments, d: SampleDesign, i: int) -> BiasMse:
    return BiasMse(bias_ratio_single(m, d, i), mse_ratio_single(m, d, i))


def bias_product_singh(m: PopulationMoments, d: SampleDesign) -> float:
    ones = np.ones(m.k)
    bracket = float(np.sum(m.Csq) + _pair_sum(m, ones) - np.sum(m.C0i))
    return d.f * m.Ybar * bracket


def mse_product_singh(m: PopulationMoments, d: SampleDesign) -> float:
    ones = np.ones(m.k)
    bracket = float(m.C0sq + np.sum(m.Csq) + 2 * _pair_sum(m, ones) - 2 * np.sum(m.C0i))
    return d.f * m.Ybar**2 * bracket


def product_singh(m: PopulationMoments, d: SampleDesign) -> BiasMse:
    return BiasMse(bias_product_singh(m, d), mse_product_singh(m, d))


def analytic(kind: EstimatorKind, m: PopulationMoments, d: SampleDesign,
             w: WeightVector | None = None) -> BiasMse:
    """First-order bias and MSE of the estimator named by ``kind``."""
    kind.check(m.k)
    if kind.tag == "mean":
        return BiasMse(0.0, mse_sample_mean(m, d))
    if kind.tag == "ratio":
        return ratio_single(m, d, kind.index)
    if kind.tag == "product":
        return product_singh(m, d)
    if w is None:
        raise ValidationError(f"weights are required for {kind.token}")
    bias = {
        "arithmetic": bias_arithmetic,
        "geometric": bias_geometric,
        "harmonic": bias_harmonic,
    }[kind.tag](m, d, w)
    return BiasMse(bias, mse_multiattribute(m, d, w))


def bias_ordering_report(m: PopulationMoments, w: WeightVector,
                         d: SampleDesign | None = None) -> OrderingReport:
    """Sign analysis of ``|B_ap| > |B_gp|`` plus a direct comparison of all three biases."""
    wv = _w(m, w)
    sw2c = float(np.sum(wv**2 * m.Csq))
    swc = float(np.sum(wv * m.Csq))
    sw0 = float(np.sum(wv * m.C0i))
    pair = _pair_sum(m, wv)
    factor1 = 0.5 * sw2c - 2 * sw0 + 2 * pair + 1.5 * swc
    factor2 = 0.5 * swc - 0.5 * sw2c - pair
    a = _bracket_arithmetic(m, wv)
    g = _bracket_geometric(m, wv)
    h = _bracket_harmonic(m, wv)
    scale = 1.0 if d is None else d.f * m.Ybar
    abs_b = (abs(scale * a), abs(scale * g), abs(scale * h))
    return OrderingReport(
        factor1=factor1,
        factor2=factor2,
        predicted_ordering_holds=factor1 * factor2 > 0,
        exact_difference=a * a - g * g,
        abs_biases=abs_b,
        observed_ap_gt_gp=abs_b[0] > abs_b[1],
        observed_gp_gt_hp=abs_b[1] > abs_b[2],
    )
