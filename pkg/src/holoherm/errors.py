"""Exception types shared across the package."""


class HoloHermError(Exception):
    """Base class for all package errors."""


class ParameterError(HoloHermError, ValueError):
    """A parameter pack violates its stated constraints."""


class EnvelopeError(HoloHermError, ValueError):
    """Combined weight + integrand exponent is not negative definite.

    Raised when a requested integral cannot be assigned a Gaussian
    envelope; this almost always signals a caller bug (e.g. integrating
    against the bare weighted measure, which grows along the real axis).
    """


class NumericalError(HoloHermError, ArithmeticError):
    """A non-finite value appeared during quadrature or evaluation."""


class ConvergenceError(NumericalError):
    """Self-convergence check failed: doubling nodes moved the result."""


class ConsistencyError(HoloHermError):
    """An internal identity that must hold by construction was violated."""


class ConfigError(HoloHermError, ValueError):
    """Invalid verification-suite configuration."""
