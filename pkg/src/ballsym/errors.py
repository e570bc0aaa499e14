"""Exception types shared across the package."""


class BallsymError(Exception):
    """Base class for all package-specific errors."""


class InvalidDomainError(BallsymError):
    """The radius function is not strictly positive, so the curve does not
    bound a star-shaped domain with the origin inside."""


class IllConditionedBasisError(BallsymError):
    """The boundary collocation system is rank deficient; lower k_basis."""


class DegenerateParameterError(BallsymError):
    """A parameter value makes the closed-form solution collapse (c0 = 0)."""


class InadmissibleBetaError(BallsymError):
    """The derived exponent is a negative integer, outside the admissible set."""


class ParameterRangeError(BallsymError):
    """An argument lies outside the range where the formula is valid."""


class LawEvaluationError(BallsymError):
    """A user-supplied boundary-law callback failed or returned bad values."""


class RecoveryStepError(BallsymError):
    """The shape iteration could not produce an acceptable step."""

    def __init__(self, message: str, iteration: int):
        super().__init__(f"{message} (iteration {iteration})")
        self.iteration = iteration
