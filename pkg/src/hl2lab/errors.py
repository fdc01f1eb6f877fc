"""Exception types shared across the package."""


class HL2Error(Exception):
    """Base class for all package errors."""


class InvalidParams(HL2Error, ValueError):
    pass


class GenerationFailed(HL2Error, RuntimeError):
    pass


class EmptyGraph(HL2Error, ValueError):
    pass


class ParseError(HL2Error, ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class BudgetExceeded(HL2Error, RuntimeError):
    """Raised when a construction would exceed its vertex budget.

    ``built`` holds whatever was constructed before the limit was hit and
    ``predicted`` the recurrence-predicted size rows that could not be built.
    """

    def __init__(self, message: str, built=None, predicted=None):
        super().__init__(message)
        self.built = built
        self.predicted = predicted or []


class TooLarge(HL2Error, ValueError):
    pass


class ConvergenceFailure(HL2Error, ArithmeticError):
    pass


class NotNormalized(HL2Error, ValueError):
    pass


class NotRegular(HL2Error, ValueError):
    pass


class NotHermitian(HL2Error, ValueError):
    pass


class NotPSD(HL2Error, ValueError):
    pass
