"""Exception hierarchy for repdisc."""


class DiscriminationError(Exception):
    """Base class for every error raised by this package."""


class LambdaOutOfRange(DiscriminationError, ValueError):
    pass


class DimensionTooSmall(DiscriminationError, ValueError):
    pass


class InvalidSharpObservable(DiscriminationError, ValueError):
    pass


class NotPOVM(DiscriminationError, ValueError):
    pass


class InvalidEffect(DiscriminationError, ValueError):
    pass


class InvalidState(DiscriminationError, ValueError):
    pass


class StructureViolation(DiscriminationError, ValueError):
    """An eigenvalue table entry breaks the uniform (lambda, mu) structure.

    ``label`` is the 1-based effect label and ``index`` the 0-based basis
    index of the first offending entry.
    """

    def __init__(self, message: str, label: int, index: int):
        super().__init__(message)
        self.label = label
        self.index = index


class BadOutcome(DiscriminationError, ValueError):
    pass


class NumericalBreakdown(DiscriminationError, ArithmeticError):
    pass


class KernelDomainMismatch(DiscriminationError, ValueError):
    pass


class BudgetExceeded(DiscriminationError, RuntimeError):
    pass


class DegenerateLambda(DiscriminationError, ValueError):
    pass


class RangeError(DiscriminationError, ValueError):
    pass


class UnsupportedRounds(DiscriminationError, ValueError):
    pass


class InvalidGrid(DiscriminationError, ValueError):
    pass


class ToleranceViolation(DiscriminationError, ArithmeticError):
    """A formula disagrees with enumeration; ``row`` is the worst offender."""

    def __init__(self, message: str, row):
        super().__init__(message)
        self.row = row
