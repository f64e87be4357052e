"""Finite population, SRSWOR design, population moments and samples.

A :class:`Population` is a roster of ``N`` units, each carrying a study value
``y`` and ``k`` binary attribute indicators. Everything the first-order
bias/MSE formulas need is collected in :class:`PopulationMoments`, which can be
computed from unit data or assembled from published summary statistics.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from .errors import EnumerationTooLarge, ValidationError

#: Largest number of subsets :func:`all_samples` will enumerate.
MAX_ENUMERATION = 10**6


def _frozen(a, dtype=float):
    a = np.array(a, dtype=dtype)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class Population:
    """Unit-level population: study values ``y`` (N,) and indicators ``phi`` (N, k)."""

    y: np.ndarray
    phi: np.ndarray

    @property
    def N(self) -> int:
        return self.y.shape[0]

    @property
    def k(self) -> int:
        return self.phi.shape[1]


def build_population(y, phi) -> Population:
    """Validate unit data and return a :class:`Population`.

    ``phi`` may be a 1-D sequence for a single attribute. Every attribute
    column must contain both a 0 and a 1.
    """
    y = np.asarray(y, dtype=float)
    phi = np.asarray(phi)
    if phi.ndim == 1:
        phi = phi[:, None]
    if y.ndim != 1 or phi.ndim != 2:
        raise ValidationError("y must be 1-D and phi must be N x k")
    if y.shape[0] != phi.shape[0]:
        raise ValidationError(
            f"dimension mismatch: {y.shape[0]} study values but {phi.shape[0]} attribute rows"
        )
    if y.shape[0] < 2:
        raise ValidationError("population needs at least 2 units")
    if phi.shape[1] < 1:
        raise ValidationError("population needs at least one attribute")
    if not np.all(np.isfinite(y)):
        raise ValidationError("study values must be finite")
    phi_f = phi.astype(float)
    bad = ~((phi_f == 0) | (phi_f == 1))
    if bad.any():
        row, col = np.argwhere(bad)[0]
        raise ValidationError(
            f"non-binary attribute value {phi[row, col]!r} at row {row + 1}, phi{col + 1}"
        )
    col_sum = phi_f.sum(axis=0)
    degenerate = np.flatnonzero((col_sum == 0) | (col_sum == phi_f.shape[0]))
    if degenerate.size:
        raise ValidationError(f"degenerate attribute phi{degenerate[0] + 1}: column is constant")
    return Population(y=_frozen(y), phi=_frozen(phi_f.astype(np.int8), dtype=np.int8))


@dataclass(frozen=True)
class SampleDesign:
    """SRSWOR design with finite-population factor ``f = 1/n - 1/N``."""

    N: int
    n: int
    f: float


def design(N: int, n: int) -> SampleDesign:
    N, n = int(N), int(n)
    if N < 1 or not 1 <= n <= N:
        raise ValidationError(f"sample size must satisfy 1 <= n <= N (got n={n}, N={N})")
    f = 0.0 if n == N else 1.0 / n - 1.0 / N
    return SampleDesign(N=N, n=n, f=f)


@dataclass(frozen=True, eq=False)
class PopulationMoments:
    """Population means, variances and relative (co)variance coefficients.

    ``Cij`` is the full k x k matrix with ``Csq`` on the diagonal and
    ``rho_phi[i, j] * C_i * C_j`` off it; ``C0i[i] = rho_pb[i] * C_0 * C_i``.
    Variances use divisor ``N - 1``.
    """

    N: int
    k: int
    Ybar: float
    P: np.ndarray
    S2y: float
    S2phi: np.ndarray
    C0sq: float
    Csq: np.ndarray
    C0i: np.ndarray
    Cij: np.ndarray
    rho_pb: np.ndarray
    rho_phi: np.ndarray

    def subset(self, attributes: Sequence[int]) -> "PopulationMoments":
        """Moments restricted to the given attribute indices (in that order)."""
        idx = np.asarray(attributes, dtype=int)
        return _assemble(
            self.N,
            self.Ybar,
            self.P[idx],
            self.S2y,
            self.S2phi[idx],
            self.rho_pb[idx],
            self.rho_phi[np.ix_(idx, idx)],
        )

    def summary(self) -> dict:
        """Plain-Python summary accepted by :func:`moments_from_summary`."""
        return {
            "N": self.N,
            "Ybar": float(self.Ybar),
            "P": self.P.tolist(),
            "S2y": float(self.S2y),
            "S2phi": self.S2phi.tolist(),
            "rho_pb": self.rho_pb.tolist(),
            "rho_phi": self.rho_phi.tolist(),
        }


def _assemble(N, Ybar, P, S2y, S2phi, rho_pb, rho_phi) -> PopulationMoments:
    # single construction path so unit-data and summary inputs agree bit for bit
    P = np.asarray(P, dtype=float)
    S2phi = np.asarray(S2phi, dtype=float)
    rho_pb = np.asarray(rho_pb, dtype=float)
    rho_phi = np.asarray(rho_phi, dtype=float)
    C0sq = S2y / Ybar**2
    Csq = S2phi / P**2
    C0 = math.sqrt(C0sq)
    C = np.sqrt(Csq)
    C0i = rho_pb * C0 * C
    Cij = rho_phi * np.outer(C, C)
    np.fill_diagonal(Cij, Csq)
    return PopulationMoments(
        N=int(N),
        k=P.shape[0],
        Ybar=float(Ybar),
        P=_frozen(P),
        S2y=float(S2y),
        S2phi=_frozen(S2phi),
        C0sq=float(C0sq),
        Csq=_frozen(Csq),
        C0i=_frozen(C0i),
        Cij=_frozen(Cij),
        rho_pb=_frozen(rho_pb),
        rho_phi=_frozen(rho_phi),
    )


def population_moments(pop: Population) -> PopulationMoments:
    """Compute all moments of a unit-level population (divisor ``N - 1``).

    Raises :class:`ValidationError` for a constant study variable or a
    non-positive population mean.
    """
    y = pop.y
    phi = pop.phi.astype(float)
    S2y = float(np.var(y, ddof=1))
    if S2y == 0.0:
        raise ValidationError("study variable is constant; correlations are undefined")
    Ybar = float(np.mean(y))
    if Ybar <= 0:
        raise ValidationError(f"population mean must be positive (got {Ybar})")
    P = phi.mean(axis=0)
    S2phi = phi.var(axis=0, ddof=1)
    corr = np.clip(np.corrcoef(np.column_stack([y, phi]), rowvar=False), -1.0, 1.0)
    rho_pb = corr[0, 1:]
    rho_phi = (corr[1:, 1:] + corr[1:, 1:].T) / 2
    np.fill_diagonal(rho_phi, 1.0)
    return _assemble(pop.N, Ybar, P, S2y, S2phi, rho_pb, rho_phi)


def _rho_phi_matrix(rho_phi, k):
    if rho_phi is None:
        if k == 1:
            return np.ones((1, 1))
        raise ValidationError("missing field rho_phi")
    r = np.asarray(rho_phi, dtype=float)
    if r.ndim == 0:
        if k != 2:
            raise ValidationError("rho_phi: matrix required for k>2" if k > 2 else
                                  "rho_phi: scalar form only valid for k=2")
        return np.array([[1.0, float(r)], [float(r), 1.0]])
    if r.shape != (k, k):
        raise ValidationError(f"rho_phi must be {k}x{k} (got shape {r.shape})")
    if not np.array_equal(r, r.T):
        raise ValidationError("rho_phi must be symmetric")
    if not np.all(np.diag(r) == 1.0):
        raise ValidationError("rho_phi must have unit diagonal")
    return r


def moments_from_summary(N, Ybar, P, S2y, S2phi, rho_pb, rho_phi=None) -> PopulationMoments:
    """Assemble moments from summary statistics.

    ``rho_phi`` is a k x k matrix, a scalar when k = 2, or omitted when k = 1.
    """
    P = np.atleast_1d(np.asarray(P, dtype=float))
    S2phi = np.atleast_1d(np.asarray(S2phi, dtype=float))
    rho_pb = np.atleast_1d(np.asarray(rho_pb, dtype=float))
    k = P.shape[0]
    if P.ndim != 1 or k < 1:
        raise ValidationError("P must be a non-empty list of proportions")
    if S2phi.shape != (k,) or rho_pb.shape != (k,):
        raise ValidationError(f"P, S2phi and rho_pb must all have length {k}")
    if int(N) != N or N < 2:
        raise ValidationError(f"N must be an integer >= 2 (got {N})")
    if not Ybar > 0:
        raise ValidationError(f"Ybar must be positive (got {Ybar})")
    if not np.all((P > 0) & (P < 1)):
        raise ValidationError("every P must lie strictly between 0 and 1")
    if not S2y >= 0 or not np.all(S2phi > 0):
        raise ValidationError("variances must be nonnegative (S2phi strictly positive)")
    if np.any(np.abs(rho_pb) > 1):
        raise ValidationError("|rho_pb| must not exceed 1")
    rho_phi = _rho_phi_matrix(rho_phi, k)
    if np.any(np.abs(rho_phi) > 1):
        raise ValidationError("|rho_phi| must not exceed 1")
    return _assemble(int(N), float(Ybar), P, float(S2y), S2phi, rho_pb, rho_phi)


@dataclass(frozen=True)
class Sample:
    """Sorted tuple of distinct unit indices."""

    indices: tuple

    def __post_init__(self):
        if len(set(self.indices)) != len(self.indices):
            raise ValidationError("sample indices must be distinct")

    @property
    def n(self) -> int:
        return len(self.indices)


@dataclass(frozen=True, eq=False)
class SampleStats:
    """Sample mean, attribute proportions and ratios ``r_i = ybar / p_i``.

    ``r[i]`` is NaN where ``defined[i]`` is False (``p[i] == 0``); consult
    ``defined`` rather than testing for NaN.
    """

    ybar: float
    p: np.ndarray
    r: np.ndarray
    defined: np.ndarray


def _check_n(pop, n):
    if not 1 <= n <= pop.N:
        raise ValidationError(f"sample size must satisfy 1 <= n <= N (got n={n}, N={pop.N})")


def draw_srswor(pop: Population, n: int, rng=None) -> Sample:
    """Draw a simple random sample without replacement.

    ``rng`` is a :class:`numpy.random.Generator` or anything
    :func:`numpy.random.default_rng` accepts.
    """
    _check_n(pop, n)
    rng = np.random.default_rng(rng)
    idx = np.sort(rng.choice(pop.N, size=n, replace=False))
    return Sample(tuple(int(i) for i in idx))


def _check_cap(N, n, cap):
    count = math.comb(N, n)
    if count > cap:
        raise EnumerationTooLarge(
            f"enumeration too large: C({N},{n}) = {count} subsets exceeds cap {cap}"
        )
    return count


def all_samples(pop: Population, n: int, cap: int = MAX_ENUMERATION) -> Iterator[Sample]:
    """Every n-subset exactly once, in lexicographic order."""
    _check_n(pop, n)
    _check_cap(pop.N, n, cap)
    return (Sample(c) for c in itertools.combinations(range(pop.N), n))


def subset_index_blocks(N: int, n: int, cap: int = MAX_ENUMERATION, block: int = 65536):
    """Yield ``(m, n)`` integer arrays covering all n-subsets of ``range(N)``.

    Same order as :func:`all_samples`; used for vectorised exhaustive work.
    """
    total = _check_cap(N, n, cap)

    def gen():
        combos = itertools.combinations(range(N), n)
        remaining = total
        while remaining:
            m = min(block, remaining)
            flat = itertools.chain.from_iterable(itertools.islice(combos, m))
            yield np.fromiter(flat, dtype=np.intp, count=m * n).reshape(m, n)
            remaining -= m

    return gen()


def sample_statistics(pop: Population, s: Sample) -> SampleStats:
    idx = np.asarray(s.indices, dtype=np.intp)
    if idx.size == 0:
        raise ValidationError("empty sample")
    ybar = float(np.mean(pop.y[idx]))
    p = pop.phi[idx].mean(axis=0)
    return stats_from_values(ybar, p)


def stats_from_values(ybar: float, p) -> SampleStats:
    """Build :class:`SampleStats` directly from a sample mean and proportions."""
    p = np.atleast_1d(np.asarray(p, dtype=float))
    if np.any((p < 0) | (p > 1)):
        raise ValidationError("sample proportions must lie in [0, 1]")
    defined = p > 0
    r = np.full(p.shape, np.nan)
    r[defined] = ybar / p[defined]
    return SampleStats(ybar=float(ybar), p=_frozen(p), r=_frozen(r), defined=_frozen(defined, bool))
