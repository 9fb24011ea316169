from typing import Any, Optional


class ToolkitError(Exception):
    """Base class for every error raised by the toolkit."""


class InputError(ToolkitError):
    """Raised when user supplied data or parameters are unusable."""


class ParseError(InputError):
    """
    Raised when an interchange document cannot be read.

    Attributes:
        line (int, optional): 1-based line of the offending entry, when known.
    """

    def __init__(self, message: str, line: Optional[int] = None) -> None:
        self.line = line
        if line is not None:
            message = "line %d: %s" % (line, message)
        super().__init__(message)


class CheckFailure(ToolkitError):
    """
    A checker found a violated hypothesis or property.

    Attributes:
        witness (Any): Canonical description of the offending object.
    """

    def __init__(self, message: str, witness: Any = None) -> None:
        self.witness = witness
        super().__init__(message)


class BudgetExceeded(ToolkitError):
    """Raised when a bounded search runs out of steps or room."""


class SimplexNotInComplex(InputError):
    pass


class VertexCollision(InputError):
    pass


class EmptyComplex(InputError):
    pass


class ParameterMismatch(InputError):
    pass


class NotSimplicial(CheckFailure):
    pass


class MalformedCubicalComplex(CheckFailure):
    pass


class MonotonicityViolation(CheckFailure):
    pass


class IdempotenceViolation(CheckFailure):
    pass


class NotABadSimplex(InputError):
    pass


class NotCompleteJoin(CheckFailure):
    pass


class HypothesisViolation(CheckFailure):
    """
    A flow hypothesis failed.

    Attributes:
        condition (int): Index of the failed condition (1, 2 or 3).
    """

    def __init__(self, condition: int, message: str, witness: Any = None) -> None:
        self.condition = condition
        super().__init__("condition (%d): %s" % (condition, message), witness)


class NonTermination(CheckFailure):
    pass


class InsufficientLabels(InputError):
    pass


class NotASphere(InputError):
    pass


class AddressTooShallow(InputError):
    pass
