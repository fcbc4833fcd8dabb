"""Exception types shared across the package."""


class DomainError(ValueError):
    """An evaluation left the mathematical domain of an operation.

    Examples: ln of a non-positive value, sqrt at or below zero (jets need a
    strictly interior point), division by zero, a real power of a non-positive
    base, or an ODE coefficient with a pole or zero inside the requested span.
    """


class NotAGraphError(RuntimeError):
    """A transformed surface failed the vertical-line test over the sampled region."""
