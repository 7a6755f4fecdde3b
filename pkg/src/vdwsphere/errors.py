"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class CapExceededError(ValueError):
    """A requested order exceeds the configured hard cap."""


class NonConvergenceError(RuntimeError):
    """An iterative scheme (series or quadrature) failed to reach tolerance."""


class OverflowRangeError(OverflowError):
    """An unscaled product left the representable floating-point range."""


class RegimeError(ValueError):
    """Inputs violate the physical regime an operation is defined for."""


class ConfigError(ValueError):
    """A run configuration failed validation (CLI exit code 2)."""
