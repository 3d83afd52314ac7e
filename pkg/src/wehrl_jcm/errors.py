"""Exception types raised by the numerical routines."""


class DomainError(ValueError):
    """Argument outside the mathematical domain of a routine."""


class NumericalError(ArithmeticError):
    """Base class for convergence failures."""

    def __init__(self, message, estimate=None):
        super().__init__(message)
        self.estimate = estimate


class SeriesConvergenceError(NumericalError):
    """A truncated series could not reach its tolerance within the term cap."""


class QuadratureConvergenceError(NumericalError):
    """A quadrature rule exhausted its refinement budget."""


class SeriesFallbackWarning(RuntimeWarning):
    """A series was requested outside its convergence guard; quadrature was used."""
