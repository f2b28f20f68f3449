"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain of the operation."""


class ConvergenceError(DomainError):
    """The requested series is divergent (e.g. a non-admissible index)."""


class RegimeError(DomainError):
    """Arithmetic mixed an exact scalar with a floating-point one."""


class TelescopingError(ArithmeticError):
    """An exact telescoping check produced a nonzero residual."""
