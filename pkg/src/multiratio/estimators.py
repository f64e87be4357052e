"""Point estimators of the population mean from one sample.

Every multi-attribute estimator combines the calibrated terms
``t_i = ybar * (P_i / p_i)`` (equivalently ``r_i * P_i``):

* arithmetic (Olkin type):  ``sum w_i t_i``
* geometric:                ``prod t_i ** w_i``
* harmonic:                 ``1 / sum(w_i / t_i)``
* product (Singh type):     ``ybar * prod(P_i / p_i)``

Scalar functions take a :class:`~multiratio.population.SampleStats` and raise
on undefined input. :func:`evaluate_batch` runs the same arithmetic over many
samples at once and returns a definedness mask instead of raising.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

import numpy as np

from .errors import NonPositiveRatio, ValidationError, ZeroDenominator, ZeroProportion
from .population import SampleStats

WEIGHT_SUM_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class WeightVector:
    """Weights summing to one. Negative entries are allowed."""

    w: np.ndarray

    def __post_init__(self):
        w = np.atleast_1d(np.asarray(self.w, dtype=float))
        if w.ndim != 1 or w.size == 0:
            raise ValidationError("weights must be a non-empty 1-D vector")
        if not np.all(np.isfinite(w)):
            raise ValidationError("weights must be finite")
        if abs(w.sum() - 1.0) > WEIGHT_SUM_TOL:
            raise ValidationError(f"weights must sum to 1 (sum is {w.sum()!r})")
        w.setflags(write=False)
        object.__setattr__(self, "w", w)

    @property
    def k(self) -> int:
        return self.w.size

    @property
    def nonnegative(self) -> bool:
        return bool(np.all(self.w >= 0))

    def __eq__(self, other):
        return isinstance(other, WeightVector) and np.array_equal(self.w, other.w)

    def __hash__(self):
        return hash(self.w.tobytes())


_KIND_RE = re.compile(r"^(mean|ap|gp|hp|ts|ratio:(\d+))$")
_LABELS = {
    "mean": "mean",
    "arithmetic": "ap",
    "geometric": "gp",
    "harmonic": "hp",
    "product": "ts",
}


@dataclass(frozen=True)
class EstimatorKind:
    """Which estimator to evaluate.

    ``tag`` is one of ``mean``, ``ratio``, ``arithmetic``, ``geometric``,
    ``harmonic``, ``product``. ``index`` is the zero-based attribute for
    ``ratio`` and ``None`` otherwise.
    """

    tag: str
    index: int | None = None

    def __post_init__(self):
        if self.tag == "ratio":
            if self.index is None or self.index < 0:
                raise ValidationError("ratio estimator needs a nonnegative attribute index")
        elif self.tag in _LABELS:
            if self.index is not None:
                raise ValidationError(f"{self.tag} estimator takes no attribute index")
        else:
            raise ValidationError(f"unknown estimator {self.tag!r}")

    @classmethod
    def parse(cls, token: str) -> "EstimatorKind":
        """Parse a CLI token: ``mean``, ``ratio:i`` (1-based), ``ap``, ``gp``, ``hp``, ``ts``."""
        m = _KIND_RE.match(token.strip())
        if not m:
            raise ValidationError(f"unknown estimator {token!r}")
        if m.group(2):
            i = int(m.group(2))
            if i < 1:
                raise ValidationError("ratio attribute numbers start at 1")
            return cls("ratio", i - 1)
        tag = {v: k for k, v in _LABELS.items()}[m.group(1)]
        return cls(tag)

    @property
    def token(self) -> str:
        if self.tag == "ratio":
            return f"ratio:{self.index + 1}"
        return _LABELS[self.tag]

    @property
    def multiattribute(self) -> bool:
        return self.tag in ("arithmetic", "geometric", "harmonic", "product")

    def check(self, k: int) -> None:
        if self.tag == "ratio" and self.index >= k:
            raise ValidationError(f"ratio:{self.index + 1} requested but only {k} attribute(s)")


MEAN = EstimatorKind("mean")
ARITHMETIC = EstimatorKind("arithmetic")
GEOMETRIC = EstimatorKind("geometric")
HARMONIC = EstimatorKind("harmonic")
PRODUCT = EstimatorKind("product")


def default_roster(k: int) -> tuple[EstimatorKind, ...]:
    """The comparison roster: mean, each single ratio, ap, gp, hp, ts."""
    ratios = tuple(EstimatorKind("ratio", i) for i in range(k))
    return (MEAN, *ratios, ARITHMETIC, GEOMETRIC, HARMONIC, PRODUCT)


# -- array kernels ---------------------------------------------------------
# ``t`` has shape (..., k); reductions are over the last axis.


def _ratio_terms(ybar, p, P):
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.asarray(ybar, dtype=float)[..., None] * (P / p)


def _all_equal(t):
    return np.all(t == t[..., :1], axis=-1)


def _arithmetic(t, w):
    out = np.sum(w * t, axis=-1)
    return np.where(_all_equal(t), t[..., 0], out)


def _ordered(t, w):
    # rows where the weighted-mean inequality HM <= GM <= AM must hold
    return np.all(w >= 0) & np.all(t > 0, axis=-1)


def _harmonic(t, w):
    with np.errstate(divide="ignore", invalid="ignore"):
        out = 1.0 / np.sum(w / t, axis=-1)
    # for near-equal terms rounding can put HM a few ulps above AM
    out = np.where(_ordered(t, w), np.minimum(out, _arithmetic(t, w)), out)
    return np.where(_all_equal(t), t[..., 0], out)


def _geometric(t, w):
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.exp(np.sum(w * np.log(t), axis=-1))
        clipped = np.clip(out, _harmonic(t, w), _arithmetic(t, w))
    out = np.where(_ordered(t, w), clipped, out)
    return np.where(_all_equal(t), t[..., 0], out)


def _product(ybar, p, P):
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.asarray(ybar, dtype=float) * np.prod(P / p, axis=-1)


def evaluate_batch(kind: EstimatorKind, ybar, p, P, w: WeightVector | None = None):
    """Evaluate ``kind`` on many samples.

    Parameters
    ----------
    ybar : array of shape (R,)
    p : array of shape (R, k)
    P : array of shape (k,)
    w : WeightVector, required for arithmetic/geometric/harmonic

    Returns
    -------
    values, defined : ndarrays of shape (R,)
        ``values`` is NaN wherever ``defined`` is False.
    """
    ybar = np.asarray(ybar, dtype=float)
    p = np.asarray(p, dtype=float)
    P = np.asarray(P, dtype=float)
    kind.check(P.size)
    if kind.tag == "mean":
        return ybar.copy(), np.ones(ybar.shape, dtype=bool)
    if kind.tag == "ratio":
        i = kind.index
        ok = p[..., i] > 0
        vals = _ratio_terms(ybar, p[..., i : i + 1], P[i : i + 1])[..., 0]
        return np.where(ok, vals, np.nan), ok
    ok = np.all(p > 0, axis=-1)
    if kind.tag == "product":
        return np.where(ok, _product(ybar, p, P), np.nan), ok
    wv = _weights_for(w, P.size)
    t = _ratio_terms(ybar, p, P)
    if kind.tag == "arithmetic":
        vals = _arithmetic(t, wv)
    elif kind.tag == "geometric":
        ok &= np.all(t > 0, axis=-1)
        vals = _geometric(t, wv)
    else:
        ok &= np.all(t != 0, axis=-1)
        vals = _harmonic(t, wv)
        ok &= np.isfinite(vals)
    return np.where(ok, vals, np.nan), ok


def _weights_for(w, k):
    if w is None:
        raise ValidationError("weights are required for the arithmetic/geometric/harmonic estimators")
    if w.k != k:
        raise ValidationError(f"expected {k} weights, got {w.k}")
    return w.w


# -- scalar API ------------------------------------------------------------


def _require_defined(stats: SampleStats, attributes=None):
    missing = np.flatnonzero(~stats.defined)
    if attributes is not None:
        missing = np.intersect1d(missing, attributes)
    if missing.size:
        raise ZeroProportion(missing)


def est_mean(stats: SampleStats) -> float:
    return stats.ybar


def est_ratio_single(stats: SampleStats, P, i: int) -> float:
    """Classical ratio estimator ``ybar * P_i / p_i`` for attribute ``i`` (zero-based)."""
    P = np.atleast_1d(np.asarray(P, dtype=float))
    if not 0 <= i < stats.p.size:
        raise ValidationError(f"attribute index {i} out of range")
    _require_defined(stats, [i])
    return float(_ratio_terms(stats.ybar, stats.p[i : i + 1], P[i : i + 1])[0])


def _terms(stats, P):
    P = np.atleast_1d(np.asarray(P, dtype=float))
    if P.shape != stats.p.shape:
        raise ValidationError(f"expected {stats.p.size} population proportions, got {P.size}")
    _require_defined(stats)
    return _ratio_terms(stats.ybar, stats.p, P)


def est_olkin_arithmetic(stats: SampleStats, P, w: WeightVector) -> float:
    t = _terms(stats, P)
    return float(_arithmetic(t, _weights_for(w, t.size)))


def est_geometric(stats: SampleStats, P, w: WeightVector) -> float:
    """Weighted geometric mean of the ratio terms, computed in log space."""
    t = _terms(stats, P)
    if np.any(t <= 0):
        raise NonPositiveRatio("geometric estimator needs every r_i * P_i > 0")
    return float(_geometric(t, _weights_for(w, t.size)))


def est_harmonic(stats: SampleStats, P, w: WeightVector) -> float:
    t = _terms(stats, P)
    wv = _weights_for(w, t.size)
    if np.any(t == 0):
        raise NonPositiveRatio("harmonic estimator needs every r_i * P_i != 0")
    if np.sum(wv / t) == 0:
        raise ZeroDenominator("sum of w_i / (r_i P_i) is zero")
    return float(_harmonic(t, wv))


def est_product_singh(stats: SampleStats, P) -> float:
    """Product-type estimator ``ybar * prod(P_i / p_i)``."""
    P = np.atleast_1d(np.asarray(P, dtype=float))
    _terms(stats, P)
    return float(_product(stats.ybar, stats.p, P))


def evaluate(kind: EstimatorKind, stats: SampleStats, P, w: WeightVector | None = None) -> float:
    """Dispatch to the scalar estimator named by ``kind``."""
    kind.check(stats.p.size)
    if kind.tag == "mean":
        return est_mean(stats)
    if kind.tag == "ratio":
        return est_ratio_single(stats, P, kind.index)
    if kind.tag == "product":
        return est_product_singh(stats, P)
    fn = {
        "arithmetic": est_olkin_arithmetic,
        "geometric": est_geometric,
        "harmonic": est_harmonic,
    }[kind.tag]
    return fn(stats, P, w)
