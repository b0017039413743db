"""Exception types shared across the package."""


class NomaplanError(Exception):
    """Base class for all package errors."""


class DomainError(NomaplanError, ValueError):
    """An argument is outside the mathematical domain of an operation."""


class BracketError(NomaplanError):
    """A root finder was given an interval without a sign change."""


class ConvergenceError(NomaplanError):
    """An iterative solver exhausted its iteration budget."""


class InfeasibleError(NomaplanError):
    """No parameter value in the admissible range can meet the target."""


class StabilityError(NomaplanError):
    """A queue simulation was configured with arrival rate >= service rate."""


class ConfigError(NomaplanError):
    """A config file is missing a field or contains an unparseable value."""
