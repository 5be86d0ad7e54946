"""Exception types raised across the package."""


class InvalidArgument(ValueError):
    """An argument violates a documented precondition."""


class DegenerateSeries(ValueError):
    """The series has zero sample variance, so autocorrelations are undefined."""


class ConvergenceError(RuntimeError):
    """An optimizer exhausted its evaluation budget.

    The best point found so far is kept on ``best`` so callers can inspect it.
    """

    def __init__(self, message, best=None):
        super().__init__(message)
        self.best = best


class ExperimentInvalid(RuntimeError):
    """Too many Monte Carlo replications failed; ``report`` holds the partial result."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report
