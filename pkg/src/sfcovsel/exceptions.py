"""Exception hierarchy."""


class SfcovselError(Exception):
    """Base class for errors raised by this package."""


class InvalidParameterError(SfcovselError, ValueError):
    """A parameter lies outside its admissible range."""


class TractabilityError(InvalidParameterError):
    """A degree-weight sequence is not non-decreasing and concave."""


class NotSymmetricError(SfcovselError, ValueError):
    """A matrix expected to be symmetric is not."""


class NotPositiveDefiniteError(SfcovselError, ValueError):
    """A matrix expected to be positive definite is not."""


class DegenerateCovarianceError(SfcovselError, ValueError):
    """A covariance has a zero-variance coordinate and cannot be normalised."""


class ConvergenceError(SfcovselError, RuntimeError):
    """An iterative solver hit its iteration cap.

    Attributes
    ----------
    residual : float
        The stopping quantity at the final iterate.
    n_iter : int
        Number of iterations performed.
    """

    def __init__(self, message, residual=None, n_iter=None):
        super().__init__(message)
        self.residual = residual
        self.n_iter = n_iter
