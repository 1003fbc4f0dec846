"""Exception hierarchy shared by all modules.

The CLI maps these onto exit codes: bad input -> 1, resource/precision
exhaustion -> 2, violated mathematical invariant -> 3.
"""


class QuatsysError(Exception):
    """Base class for all library errors."""


class InputError(QuatsysError):
    """Malformed or unsupported user input (CLI exit code 1)."""


class CapExceeded(QuatsysError):
    """A configured search/memory cap was hit before a decision (exit code 2)."""


class PrecisionError(QuatsysError):
    """Interval refinement could not separate the quantities involved (exit code 2)."""


class InvariantViolation(QuatsysError):
    """A certified mathematical invariant failed; always a defect (exit code 3)."""
