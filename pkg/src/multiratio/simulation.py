"""Monte Carlo and exhaustive evaluation of the estimators under SRSWOR.

Both modes reduce to the same thing: a collection of samples, each turned
into ``(ybar, p)``, then every estimator in the roster evaluated on all of
them. Monte Carlo replicate ``j`` draws its sample from a generator seeded by
``SeedSequence(seed, spawn_key=(j,))`` so a replicate's sample depends only
on ``(seed, j)``. Sums go through :func:`math.fsum`, which makes aggregates
independent of summation order.
"""

from __future__ import annotations

import math
from statistics import NormalDist
from dataclasses import dataclass, field

import numpy as np

from .approximation import BiasMse, analytic
from .errors import UndefinedEstimate, ValidationError
from .estimators import EstimatorKind, WeightVector, default_roster, evaluate_batch
from .population import (
    MAX_ENUMERATION,
    Population,
    PopulationMoments,
    SampleDesign,
    build_population,
    subset_index_blocks,
)

ZERO_POLICIES = ("exclude", "error")
_BLOCK = 65536


@dataclass(frozen=True)
class SimulationConfig:
    n: int
    weights: WeightVector
    reps: int = 10_000
    seed: int = 0
    zero_policy: str = "exclude"
    roster: tuple = ()
    cap: int = MAX_ENUMERATION

    def __post_init__(self):
        if self.reps < 1:
            raise ValidationError("reps must be at least 1")
        if self.seed < 0:
            raise ValidationError("seed must be nonnegative")
        if self.zero_policy not in ZERO_POLICIES:
            raise ValidationError(f"zero_policy must be one of {ZERO_POLICIES}")
        if not self.roster:
            object.__setattr__(self, "roster", default_roster(self.weights.k))
        object.__setattr__(self, "roster", tuple(self.roster))


@dataclass(frozen=True)
class EstimatorResult:
    kind: EstimatorKind
    mean: float
    bias: float
    mse: float
    bias_se: float
    mse_se: float
    used: int
    exclusion_count: int
    exclusion_fraction: float


@dataclass(frozen=True, eq=False)
class EmpiricalReport:
    """Empirical bias/MSE per estimator.

    ``samples`` is the replicate count (Monte Carlo) or ``C(N, n)``
    (exhaustive). ``mean_p`` is the average sample proportion over all
    samples, excluded or not. Standard errors are zero in exhaustive mode.
    """

    mode: str
    N: int
    n: int
    Ybar: float
    samples: int
    seed: int | None
    zero_policy: str
    weights: WeightVector
    mean_p: np.ndarray
    results: tuple = field(default_factory=tuple)

    def result(self, kind: EstimatorKind) -> EstimatorResult:
        for r in self.results:
            if r.kind == kind:
                return r
        raise KeyError(kind.token)


@dataclass(frozen=True)
class EstimatorDeviation:
    kind: EstimatorKind
    analytic: BiasMse
    empirical: BiasMse
    bias_abs_dev: float
    mse_abs_dev: float
    bias_rel_dev: float
    mse_rel_dev: float
    within_mc: bool | None


@dataclass(frozen=True)
class DeviationReport:
    mode: str
    rows: tuple

    def row(self, kind: EstimatorKind) -> EstimatorDeviation:
        for r in self.rows:
            if r.kind == kind:
                return r
        raise KeyError(kind.token)


def _row_means(values):
    # shared by population and sample means so a census reproduces Ybar exactly
    return values.sum(axis=-1) / values.shape[-1]


def _check(pop: Population, cfg: SimulationConfig):
    if not 1 <= cfg.n <= pop.N:
        raise ValidationError(f"sample size must satisfy 1 <= n <= N (got n={cfg.n}, N={pop.N})")
    if cfg.weights.k != pop.k:
        raise ValidationError(f"expected {pop.k} weights, got {cfg.weights.k}")
    for kind in cfg.roster:
        kind.check(pop.k)


def _population_means(pop):
    everyone = np.arange(pop.N)[None, :]
    Ybar = float(_row_means(pop.y[everyone])[0])
    P = _row_means(pop.phi[everyone].astype(float).transpose(0, 2, 1))[0]
    return Ybar, P


def _sample_means(pop, idx):
    ybar = _row_means(pop.y[idx])
    p = _row_means(pop.phi[idx].astype(float).transpose(0, 2, 1))
    return ybar, p


def _summarise(mode, pop, cfg, ybar, p, seed):
    Ybar, P = _population_means(pop)
    total = ybar.shape[0]
    results = []
    for kind in cfg.roster:
        vals, ok = evaluate_batch(kind, ybar, p, P, cfg.weights)
        if cfg.zero_policy == "error" and not ok.all():
            j = int(np.argmin(ok))
            bad = np.flatnonzero(p[j] == 0)
            cause = (f"zero sample proportion for phi{bad[0] + 1}" if bad.size
                     else "non-positive ratio term")
            raise UndefinedEstimate(kind.token, j, cause)
        v = vals[ok]
        used = v.size
        if used == 0:
            mean = bias = mse = bias_se = mse_se = math.nan
        else:
            mean = math.fsum(v) / used
            dev = v - Ybar
            bias = math.fsum(dev) / used
            sq = dev**2
            mse = math.fsum(sq) / used
            if mode == "exhaustive":
                bias_se = mse_se = 0.0
            elif used > 1:
                bias_se = math.sqrt(math.fsum((v - mean) ** 2) / (used - 1) / used)
                mse_se = math.sqrt(math.fsum((sq - mse) ** 2) / (used - 1) / used)
            else:
                bias_se = mse_se = math.nan
        excluded = total - used
        results.append(EstimatorResult(
            kind=kind, mean=mean, bias=bias, mse=mse, bias_se=bias_se, mse_se=mse_se,
            used=used, exclusion_count=excluded, exclusion_fraction=excluded / total,
        ))
    mean_p = np.array([math.fsum(p[:, i]) / total for i in range(pop.k)])
    return EmpiricalReport(
        mode=mode, N=pop.N, n=cfg.n, Ybar=Ybar, samples=total, seed=seed,
        zero_policy=cfg.zero_policy, weights=cfg.weights, mean_p=mean_p,
        results=tuple(results),
    )


def replicate_generator(seed: int, j: int) -> np.random.Generator:
    """Generator for Monte Carlo replicate ``j``; depends on ``(seed, j)`` only."""
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(j,)))


def replicate_indices(N: int, n: int, seed: int, start: int, stop: int) -> np.ndarray:
    """Sorted sample indices for replicates ``start..stop-1``, shape ``(stop-start, n)``."""
    out = np.empty((stop - start, n), dtype=np.intp)
    for row, j in enumerate(range(start, stop)):
        out[row] = replicate_generator(seed, j).choice(N, size=n, replace=False)
    out.sort(axis=1)
    return out


def run_monte_carlo(pop: Population, cfg: SimulationConfig) -> EmpiricalReport:
    """Estimate bias and MSE of each roster estimator from ``cfg.reps`` SRSWOR draws."""
    _check(pop, cfg)
    ybar = np.empty(cfg.reps)
    p = np.empty((cfg.reps, pop.k))
    for start in range(0, cfg.reps, _BLOCK):
        stop = min(start + _BLOCK, cfg.reps)
        idx = replicate_indices(pop.N, cfg.n, cfg.seed, start, stop)
        ybar[start:stop], p[start:stop] = _sample_means(pop, idx)
    return _summarise("monte_carlo", pop, cfg, ybar, p, cfg.seed)


def run_exhaustive(pop: Population, cfg: SimulationConfig) -> EmpiricalReport:
    """Exact expectations over all ``C(N, n)`` equally likely samples.

    Under ``zero_policy='exclude'`` each estimator's moments are conditional
    on the samples where it is defined.
    """
    _check(pop, cfg)
    ybar_parts, p_parts = [], []
    for idx in subset_index_blocks(pop.N, cfg.n, cap=cfg.cap):
        yb, pp = _sample_means(pop, idx)
        ybar_parts.append(yb)
        p_parts.append(pp)
    ybar = np.concatenate(ybar_parts)
    p = np.concatenate(p_parts)
    return _summarise("exhaustive", pop, cfg, ybar, p, None)


def _rel(dev, ref):
    if ref == 0:
        return 0.0 if dev == 0 else math.inf
    return dev / abs(ref)


def compare_to_analytic(emp: EmpiricalReport, m: PopulationMoments, d: SampleDesign,
                        w: WeightVector) -> DeviationReport:
    """Deviation of the empirical results from the first-order formulas.

    In Monte Carlo mode ``within_mc`` is True when both the bias and the MSE
    deviations are within three standard errors.
    """
    if (emp.N, emp.n) != (d.N, d.n):
        raise ValidationError("design does not match the empirical report")
    if emp.weights != w:
        raise ValidationError("weights do not match the empirical report")
    rows = []
    for r in emp.results:
        if r.kind.tag == "ratio" and r.kind.index >= m.k:
            raise ValidationError(f"estimator roster mismatch: {r.kind.token} with k={m.k}")
        a = analytic(r.kind, m, d, w)
        db = r.bias - a.bias
        dm = r.mse - a.mse
        within = None
        if emp.mode == "monte_carlo":
            within = bool(abs(db) <= 3 * r.bias_se and abs(dm) <= 3 * r.mse_se)
        rows.append(EstimatorDeviation(
            kind=r.kind, analytic=a, empirical=BiasMse(r.bias, r.mse),
            bias_abs_dev=abs(db), mse_abs_dev=abs(dm),
            bias_rel_dev=_rel(abs(db), a.bias), mse_rel_dev=_rel(abs(dm), a.mse),
            within_mc=within,
        ))
    return DeviationReport(mode=emp.mode, rows=tuple(rows))


def synthetic_population(N: int, k: int = 2, seed: int = 0, P=None,
                         attribute_loading: float = 0.96, y_loading: float = 0.82,
                         cv: float = 0.85) -> Population:
    """A study variable with ``k`` attributes positively related to it.

    A latent normal factor drives both ``y`` (clipped normal around 199.4
    with coefficient of variation about ``cv``) and each attribute, which is
    a thresholded noisy copy of the factor with population share near
    ``P[i]``. The defaults roughly mimic the 34-farm wheat summary
    (proportions 0.68 and 0.74, point-biserial correlations near 0.6, phi
    correlation near 0.72). Deterministic given ``seed``.
    """
    if P is None:
        P = [0.6765, 0.7353] if k == 2 else np.linspace(0.6, 0.75, k)
    P = np.asarray(P, dtype=float)
    if P.shape != (k,):
        raise ValidationError(f"P must have {k} entries")
    cuts = np.array([NormalDist().inv_cdf(1 - pi) for pi in P])
    rng = np.random.default_rng(seed)
    a, b = attribute_loading, y_loading
    while True:
        z = rng.standard_normal(N)
        e = rng.standard_normal(N)
        y = np.maximum(199.4 * (1 + cv * (b * z + math.sqrt(1 - b**2) * e)), 10.0)
        latent = a * z[:, None] + math.sqrt(1 - a**2) * rng.standard_normal((N, k))
        phi = (latent > cuts).astype(int)
        s = phi.sum(axis=0)
        if np.all((s > 0) & (s < N)) and np.ptp(y) > 0:
            return build_population(y, phi)
