"""Exception types raised across the package."""


class ShapeError(ValueError):
    """Lattice shape is too small to define a surface code."""


class ParameterError(ValueError):
    """An argument is outside its admissible range."""


class NoStabilizerError(ValueError):
    """Raised when a check is requested on the contracted dummy node."""


class ResourceError(RuntimeError):
    """A configured size guard (expansion terms, state dimension) was exceeded."""


class ValidationError(ValueError):
    """Input matrix or amplitude table fails a unitarity check."""


class PartialDiscretizationError(ValueError):
    """The error subgraph contains a loop, so syndrome measurement cannot fully
    discretize the error in the Pauli basis."""


class InconsistentSyndromeError(ValueError):
    """Syndrome is not in the image of the syndrome map on the error support."""
