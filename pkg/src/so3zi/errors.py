"""Exception types raised across the package."""


class DomainError(ValueError):
    """An input lies outside the domain of the operation."""


class NonConvergenceError(RuntimeError):
    """A reduction loop hit its iteration cap."""


class BudgetExceededError(RuntimeError):
    """A brute-force enumeration would exceed its configured budget."""
