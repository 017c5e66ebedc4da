"""Exception hierarchy shared by all modules."""


class ContextualityError(Exception):
    """Base class for every error raised by this package."""


class InfeasibleExpectations(ContextualityError, ValueError):
    """An expectation triple that no joint pmf of two binary variables realizes."""


class NotCircular(ContextualityError, ValueError):
    pass


class EmptyInput(ContextualityError, ValueError):
    pass


class TooLong(ContextualityError, ValueError):
    pass


class OutOfRange(ContextualityError, ValueError):
    pass


class TooManyVariables(ContextualityError, ValueError):
    pass


class MarginalMismatch(ContextualityError, ValueError):
    pass


class PreconditionFailed(ContextualityError, ValueError):
    pass


class DimensionMismatch(ContextualityError, ValueError):
    pass


class SchemaError(ContextualityError, ValueError):
    """Malformed JSON system description; ``location`` points at the offending field."""

    def __init__(self, message: str, location: str = "$"):
        super().__init__(f"{location}: {message}")
        self.location = location


class NumericalBreakdown(ContextualityError, ArithmeticError):
    """Pivot fell below tolerance while the tableau still had improving columns.

    Callers are expected to retry with a slightly perturbed right-hand side.
    """


class UnboundedProblem(ContextualityError, ArithmeticError):
    pass
