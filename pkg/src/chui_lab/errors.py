"""Exception hierarchy shared by all modules."""


class ChuiLabError(Exception):
    """Base class for every error raised by the package."""


class DomainError(ChuiLabError, ValueError):
    """An argument lies outside the domain of the operation."""


class DivergenceError(ChuiLabError):
    """The requested quantity is infinite, e.g. a kernel outside the space."""


class PoleError(ChuiLabError, ZeroDivisionError):
    """Evaluation point coincides with a pole."""


class QuadratureError(ChuiLabError):
    """A quadrature failed to reach its tolerance.

    ``achieved`` carries the error estimate that was actually reached.
    """

    def __init__(self, message, achieved=float("nan")):
        super().__init__(f"{message} (achieved error estimate {achieved:.3e})")
        self.achieved = achieved


class ConvergenceError(ChuiLabError):
    """An iterative method did not converge; ``trace`` holds diagnostics."""

    def __init__(self, message, trace=None):
        super().__init__(message)
        self.trace = trace


class CapacityError(ChuiLabError):
    """Problem size exceeds a configured cap."""


class MonotonicityError(ChuiLabError):
    """The pole-placement function is not strictly increasing."""


class UsageError(ChuiLabError, ValueError):
    """Inconsistent parameters, e.g. a rate case with the wrong weight family."""
