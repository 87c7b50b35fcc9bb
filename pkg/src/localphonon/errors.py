"""Exception and warning types."""


class ValidationError(ValueError):
    """Input violates a documented precondition."""


class NumericalError(RuntimeError):
    """A numerical routine failed (non-convergence, step underflow, ...)."""


class ConvergenceError(NumericalError):
    pass


class RabiFitError(NumericalError):
    """Raised when Fock populations cannot be identified from a Rabi trace."""


class TruncationWarning(UserWarning):
    """Significant population reached the Fock cutoff."""
