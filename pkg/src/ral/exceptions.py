"""Exception hierarchy shared by all modules."""


class RalError(Exception):
    """Base class for errors raised by this package."""


class DimensionMismatch(RalError, ValueError):
    pass


class InvalidSize(RalError, ValueError):
    pass


class SizeExceeded(RalError, ValueError):
    """Input too large for an exhaustive or runtime-guarded method."""


class DomainError(RalError, ValueError):
    """Argument outside the domain where a formula is defined."""


class QuadratureFailure(RalError, ArithmeticError):
    pass


class EmptySample(RalError, ValueError):
    pass


class InsufficientData(RalError, ValueError):
    pass


class SchemaError(RalError, ValueError):
    """Tabular input lacks required columns or rows."""
