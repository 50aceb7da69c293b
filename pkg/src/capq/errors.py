"""Exception hierarchy shared by every capq module."""


class CapqError(Exception):
    """Base class for all errors raised by capq."""


class DimensionMismatch(CapqError, ValueError):
    pass


class DimensionCap(CapqError, ValueError):
    pass


class NonHermitian(CapqError, ValueError):
    pass


class NoConvergence(CapqError, RuntimeError):
    pass


class NegativeEigenvalue(CapqError, ValueError):
    pass


class ParameterRange(CapqError, ValueError):
    pass


class InvalidChannel(CapqError, ValueError):
    pass


class InvalidPovm(CapqError, ValueError):
    pass


class InvalidState(CapqError, ValueError):
    pass


class CircuitError(CapqError, ValueError):
    """Malformed circuit program. ``line`` is 1-based, or None if not tied to a line."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class UnknownGate(CircuitError):
    pass


class DeadQubit(CircuitError):
    pass


class QubitCap(CircuitError):
    pass


class SizeCap(CapqError, ValueError):
    pass


class FormatError(CapqError, ValueError):
    """A file could not be parsed into the expected object."""
