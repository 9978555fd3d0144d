"""Exception hierarchy shared by all modules.

The CLI maps each family onto an exit code (see :mod:`gfri.cli`).
"""


class GFRIError(Exception):
    """Base class for every error raised by the package."""


class InvalidGraphError(GFRIError, ValueError):
    """Malformed graph description or signal/graph size mismatch."""


class PreconditionError(GFRIError, ValueError):
    """An operation was called outside its domain of validity."""


class BezoutError(GFRIError):
    """A complementary filterbank cannot exist for the requested parameters.

    Attributes:
        pairs: opposing root pairs ``(r, -r)`` (or ``(0, 0)`` for a zero root)
            found on the high-pass representer polynomial.
    """

    def __init__(self, message, pairs=()):
        super().__init__(message)
        self.pairs = list(pairs)


class InvertibilityError(GFRIError):
    """A wavelet level (or sampling factorization) is not invertible."""

    def __init__(self, message, level=None, condition=None):
        super().__init__(message)
        self.level = level
        self.condition = condition


class ModelMismatchError(GFRIError):
    """Spectral samples are inconsistent with the assumed sparse model."""
