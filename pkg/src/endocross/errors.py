"""Exception types raised by the library.

The CLI maps these onto exit codes: validation and domain problems exit
with 2, exhausted budgets with 3.
"""


class EndocrossError(Exception):
    """Base class for all library errors."""


class ValidationError(EndocrossError, ValueError):
    """Malformed input: bad dimensions, indices out of range, schema errors."""

    def __init__(self, message, pointer=None):
        super().__init__(message)
        self.pointer = pointer

    def __str__(self):
        msg = super().__str__()
        if self.pointer is not None:
            return f"{self.pointer}: {msg}"
        return msg


class DomainError(EndocrossError, ValueError):
    """An argument lies outside the domain where an operation is defined."""


class UnsupportedPatternError(DomainError):
    """The endomorphism's multiplicity pattern is outside what an operation handles."""


class ResourceError(EndocrossError, RuntimeError):
    """A configured budget was exhausted; ``partial`` holds what was computed."""

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial
