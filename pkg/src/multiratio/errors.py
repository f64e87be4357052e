"""Exception hierarchy.

Validation problems (bad input shapes, out-of-range values) derive from
``ValueError``; numeric failures that only show up once a computation is
attempted derive from ``ArithmeticError``. The CLI maps the two families to
different exit codes.
"""


class ValidationError(ValueError):
    """Input does not satisfy a documented precondition."""


class EnumerationTooLarge(ValidationError):
    """Exhaustive enumeration would exceed the configured subset cap."""


class NumericError(ArithmeticError):
    """A well-formed computation has no finite answer."""


class ZeroProportion(NumericError):
    """A sample proportion is zero, so ``ybar / p`` is undefined.

    ``attributes`` holds the zero-based indices of the offending attributes.
    """

    def __init__(self, attributes):
        self.attributes = tuple(int(i) for i in attributes)
        names = ", ".join(f"phi{i + 1}" for i in self.attributes)
        super().__init__(f"sample proportion is zero for attribute(s) {names}")


class NonPositiveRatio(NumericError):
    """A ratio term ``r_i * P_i`` is not strictly positive."""


class ZeroDenominator(NumericError):
    """The harmonic-mean denominator vanished."""


class SingularMomentMatrix(NumericError):
    """The attribute moment matrix is singular or too ill-conditioned."""

    def __init__(self, condition):
        self.condition = float(condition)
        super().__init__(
            f"attribute moment matrix is singular (condition estimate {self.condition:.3g})"
        )


class UndefinedEstimate(NumericError):
    """An estimator was undefined on a replicate under ``zero_policy='error'``."""

    def __init__(self, estimator, replicate, cause):
        self.estimator = estimator
        self.replicate = int(replicate)
        self.cause = cause
        super().__init__(f"{estimator} undefined on replicate {replicate}: {cause}")
