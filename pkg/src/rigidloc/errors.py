"""Exception types shared across the package."""


class ConfigurationError(ValueError):
    """Raised when a scenario or solver configuration is invalid."""


class DegenerateGeometryError(ValueError):
    """Raised when node geometry admits no well-posed solution.

    Examples: coincident nodes, an all-collinear network handed to the
    embedding step, or a kernel with no usable dominant eigenpair.
    """


class NumericalFailureError(RuntimeError):
    """Raised when an iterative routine diverges or produces non-finite values."""
