"""Weight selection for the multi-attribute estimators.

The shared first-order MSE is, up to the positive factor ``f * Ybar^2`` and
the constant ``C0^2``, the quadratic ``w'Mw - 2 w'b`` with ``M = Cij`` and
``b = C0i``. Minimising it subject to ``sum(w) = 1`` gives the stationarity
condition ``M w = b + lam * 1``, solved here directly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .approximation import mse_multiattribute
from .errors import SingularMomentMatrix, ValidationError
from .estimators import WeightVector
from .population import PopulationMoments, SampleDesign

#: Condition number above which the moment matrix is treated as singular.
MAX_CONDITION = 1e12


@dataclass(frozen=True)
class WeightSolution:
    """MSE-optimal weights.

    ``mse_at_w`` is only available when a design was passed to
    :func:`optimal_weights`. ``negative_weights`` flags solutions with a
    negative entry; they are returned unchanged.
    """

    w: WeightVector
    lagrange_multiplier: float
    condition_estimate: float
    mse_at_w: float | None = None

    @property
    def negative_weights(self) -> bool:
        return not self.w.nonnegative


def equal_weights(k: int) -> WeightVector:
    if k < 1:
        raise ValidationError("need at least one attribute")
    return WeightVector(np.full(k, 1.0 / k))


def optimal_weights(m: PopulationMoments, d: SampleDesign | None = None) -> WeightSolution:
    """Minimise the shared MSE over weights with ``sum(w) = 1``.

    The result depends on ``Cij`` and ``C0i`` only, not on ``f``, ``Ybar`` or
    ``C0^2``.

    Raises
    ------
    SingularMomentMatrix
        If the condition number of ``Cij`` exceeds :data:`MAX_CONDITION`.
    """
    if m.k < 1:
        raise ValidationError("need at least one attribute")
    M = np.asarray(m.Cij, dtype=float)
    b = np.asarray(m.C0i, dtype=float)
    cond = float(np.linalg.cond(M))
    if not np.isfinite(cond) or cond > MAX_CONDITION:
        raise SingularMomentMatrix(cond)
    if m.k == 1:
        w = WeightVector([1.0])
        lam = float(M[0, 0] - b[0])
    else:
        x = np.linalg.solve(M, np.column_stack([b, np.ones(m.k)]))
        xb, x1 = x[:, 0], x[:, 1]
        lam = float((1.0 - xb.sum()) / x1.sum())
        raw = xb + lam * x1
        # drift from 1 is a few ulps; fold it into the largest entry
        j = int(np.argmax(np.abs(raw)))
        raw[j] += 1.0 - raw.sum()
        w = WeightVector(raw)
    mse = None if d is None else mse_multiattribute(m, d, w)
    return WeightSolution(w=w, lagrange_multiplier=lam, condition_estimate=cond, mse_at_w=mse)
