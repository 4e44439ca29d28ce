class BaseExceptionError(Exception):
    """Base class for exceptions in this module."""

    def __init__(self, message: str = "An error occurred."):
        self.message = message
        super().__init__(self.message)

    def __str__(self):
        return self.message


class GridError(BaseExceptionError):
    """Raised when a grid is malformed (too few nodes, empty or inverted domain)."""


class EigenRangeError(BaseExceptionError):
    """Raised when the requested number of eigenpairs is outside [1, dimension]."""


class NonConvergenceError(BaseExceptionError):
    """Raised when an eigensolver hits its iteration cap."""


class DimensionTooLargeError(BaseExceptionError):
    """Raised when a dense solve is requested above the dense dimension limit."""


class JobServiceError(BaseExceptionError):
    """Base class for unexpected failures in the job service."""


class MatrixStructureError(BaseExceptionError):
    """Raised when a solver receives a matrix without the band structure it requires."""
