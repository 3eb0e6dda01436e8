"""Exception hierarchy shared by the library and the CLI."""


class BogoliubovError(Exception):
    """Base class for all library errors."""


class ParameterError(BogoliubovError, ValueError):
    """An input parameter is outside its admissible range."""


class InfeasibleDensityError(ParameterError):
    """A trial state would put more particles outside the condensate than exist."""


class AssumptionError(ParameterError):
    """A potential does not satisfy the decay assumption an operation needs."""


class DataError(BogoliubovError, ValueError):
    """Input data for a fit is unusable (e.g. a nonpositive residual)."""


class DomainError(BogoliubovError, ValueError):
    """A state lies outside the domain of the functional."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class NumericalError(BogoliubovError, ArithmeticError):
    """A quadrature or iterative computation failed to reach its tolerance."""

    def __init__(self, message, achieved=None):
        super().__init__(message)
        self.achieved = achieved


class ResolutionError(NumericalError):
    """A discretization is too coarse for the requested check."""
