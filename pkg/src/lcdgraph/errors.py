"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument is outside the mathematical domain of an operation."""


class CapacityError(ValueError):
    """A request exceeds a configured size cap (enumeration / materialization)."""


class InsufficientDataError(ValueError):
    """Not enough data points to carry out an estimate."""


class InfeasibleSystemError(ValueError):
    """An inequality system has no feasible point (even after closure)."""
