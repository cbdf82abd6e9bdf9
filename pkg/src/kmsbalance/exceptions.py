"""Exception hierarchy.

Every error raised on purpose by the package derives from
:class:`KmsBalanceError`, so callers (and the CLI) can catch one type.
"""


class KmsBalanceError(ValueError):
    """Base class for all package errors."""


class ShapeMismatch(KmsBalanceError):
    pass


class NotHermitian(KmsBalanceError):
    pass


class NotPositive(KmsBalanceError):
    pass


class Singular(KmsBalanceError):
    pass


class NumericalFailure(KmsBalanceError):
    pass


class InvalidGenerator(KmsBalanceError):
    pass


class InvalidTimeReversal(KmsBalanceError):
    pass


class NotFaithful(KmsBalanceError):
    """The state (or the only invariant state found) is not faithful.

    ``state`` holds the offending matrix when one is available.
    """

    def __init__(self, message, state=None):
        super().__init__(message)
        self.state = state


class NoInvariantState(KmsBalanceError):
    pass


class NotSpecial(KmsBalanceError):
    pass


class NotInvariant(KmsBalanceError):
    pass


class ThetaRhoNoncommuting(KmsBalanceError):
    pass


class ConstraintViolated(KmsBalanceError):
    pass


class CaseConstraintViolated(ConstraintViolated):
    pass
