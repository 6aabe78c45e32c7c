"""Exception types raised by spinframe."""


class SpinframeError(Exception):
    """Base class for all package errors."""


class InvalidIndex(SpinframeError, ValueError):
    """An angular-momentum label or matrix index is outside its allowed range."""


class NonConvergence(SpinframeError, RuntimeError):
    """An iterative solver hit its iteration cap.

    ``result`` carries the best iterate when the caller can still use it.
    """

    def __init__(self, message, result=None):
        super().__init__(message)
        self.result = result


class DegenerateBlock(SpinframeError, ValueError):
    """A j-block of a signal has (numerically) zero norm."""

    def __init__(self, message, j=None):
        super().__init__(message)
        self.j = j


class UnsupportedWeights(SpinframeError, ValueError):
    """Weighted merit whose principal weights cannot be reduced to z + xy form."""


class EnvelopeViolation(SpinframeError, RuntimeError):
    """A rejection-sampling density exceeded its proven upper bound."""


class EmptySample(SpinframeError, ValueError):
    """An estimator was handed zero samples."""
