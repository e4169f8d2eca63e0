"""Exception hierarchy shared by every module."""


class DilwaveError(Exception):
    """Base class for all toolkit errors."""


class InvalidInputError(DilwaveError, ValueError):
    """Malformed input: non-finite entries, wrong shape, singular transforms."""


class DomainError(DilwaveError, ValueError):
    """Input outside the domain where an operation is defined."""


class NumericError(DilwaveError, ArithmeticError):
    """An iteration failed to converge; carries diagnostics."""

    def __init__(self, message, **diagnostics):
        super().__init__(message)
        self.diagnostics = diagnostics


class HypothesisViolation(DilwaveError, ValueError):
    """The generator does not have a same-sign symmetric-part spectrum."""


class TruncationError(DilwaveError, ArithmeticError):
    """Integration range could not be truncated to the requested accuracy."""


class MethodError(DilwaveError, ValueError):
    """The requested numerical method is unavailable for this input."""


class ParseError(InvalidInputError):
    """A JSON document does not match the expected layout; ``field`` names the culprit."""

    def __init__(self, field, message):
        super().__init__(f"{field}: {message}")
        self.field = field
