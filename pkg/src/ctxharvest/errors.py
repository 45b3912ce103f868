"""Exception hierarchy shared by all modules."""


class CtxHarvestError(Exception):
    """Base class for every error raised by the package."""


class ConfigError(CtxHarvestError):
    """Invalid user configuration (bad preset, malformed file, bad flag)."""


class NumericalError(CtxHarvestError):
    """A computation could not deliver a trustworthy number."""


class NumericalOverflow(NumericalError, OverflowError):
    """A result or intermediate exceeds the float64 range."""


class AccuracyError(NumericalError):
    """Adaptive quadrature failed to reach its tolerance.

    ``estimate`` and ``error`` carry the best value found and its error bound.
    """

    def __init__(self, message, estimate=None, error=None):
        super().__init__(message)
        self.estimate = estimate
        self.error = error


class DomainError(NumericalError, ValueError):
    """Input outside the mathematical domain of a formula."""


class PreconditionError(CtxHarvestError, ValueError):
    """An operation was called on inputs it does not support."""


class ScenarioError(CtxHarvestError):
    """A measurement scenario violates one of its structural constraints."""


class LpError(NumericalError):
    """The simplex solver hit numerical trouble."""
