"""Exception types shared across the package."""


class InvalidInputError(ValueError):
    """Malformed or inconsistent input data."""


class DomainError(ValueError):
    """Argument outside the interval on which a formula is defined."""


class InapplicableError(ValueError):
    """A hypothesis gate (e.g. alpha <= kappa) is violated."""


class ConvergenceError(RuntimeError):
    """An iteration failed to converge within its budget."""


class OracleError(RuntimeError):
    """The numerical Steklov oracle could not produce a trustworthy value."""
