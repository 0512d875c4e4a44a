"""Exception hierarchy shared by all modules."""


class LstoError(Exception):
    """Base class for errors raised by this package."""


class GeometryError(LstoError, ValueError):
    """Degenerate or otherwise invalid geometry."""


class MergeMismatchError(LstoError, ValueError):
    """Two meshes cannot be glued along their interface."""


class ModelError(LstoError, ValueError):
    """A model is missing boundary conditions needed for a well-posed solve."""


class SolverError(LstoError, RuntimeError):
    """An iterative solve failed to reach its tolerance.

    Attributes
    ----------
    residual : float
        Relative residual ``||Ax - b|| / ||b||`` at the last iterate.
    iterations : int
        Number of iterations performed.
    """

    def __init__(self, message, residual, iterations):
        super().__init__(message)
        self.residual = residual
        self.iterations = iterations


class ConfigError(LstoError, ValueError):
    """Invalid run configuration. ``key`` names the offending entry."""

    def __init__(self, key, message):
        super().__init__(f"{key}: {message}")
        self.key = key
