"""Exception and warning types shared across the package."""


class DomainError(ValueError):
    """An evaluation point lies outside the function's domain."""


class ModelError(ValueError):
    """A spectrum model is invalid or unsupported for the requested operation."""


class StructureError(ValueError):
    """A matrix does not have the required Hermitian Toeplitz structure."""


class ConditioningError(ArithmeticError):
    """The Gram system is numerically singular or its condition number
    exceeds the configured ceiling."""

    def __init__(self, message, cond_estimate=None):
        super().__init__(message)
        self.cond_estimate = cond_estimate


class QuadratureError(ArithmeticError):
    """A quadrature produced non-finite values or failed to converge."""


class ConfigError(ValueError):
    """A scenario configuration file is malformed; the message names the
    offending field."""

    def __init__(self, field, message):
        super().__init__(f"{field}: {message}")
        self.field = field


class FeasibilityWarning(UserWarning):
    """A recovered solution violates the covariance constraints beyond the
    requested tolerance (a numerical, not structural, failure)."""
