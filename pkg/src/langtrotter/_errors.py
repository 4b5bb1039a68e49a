"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class ContractError(RuntimeError):
    """A structural precondition (subgroup, normality, stability) failed."""


class InvariantViolation(AssertionError):
    """A computed object contradicts an identity that must hold exactly."""


class FitUnavailable(ValueError):
    """Not enough usable data points to fit an asymptote."""
