"""Exception types raised by the precoding pipeline."""


class PrecodingError(Exception):
    """Base class for all errors raised by this package."""


class ConfigurationError(PrecodingError, ValueError):
    """Invalid system parameters or mismatched dimensions."""


class DegenerateChannelError(PrecodingError):
    """A user's channel (or detector row) is identically zero."""


class InfeasiblePrecoderError(PrecodingError):
    """The requested precoder is undefined for this channel/loading.

    Raised for rank bounds (e.g. zero forcing with more users than spatial
    dimensions), numerically singular Gram matrices, and duality power
    allocations that come out singular or negative.
    """


class PolynomialOrderError(PrecodingError):
    """The moment system for the requested polynomial order is too
    ill-conditioned to solve reliably."""
