"""Exception types shared across the package."""


class MstcdError(Exception):
    """Base class for all package-specific errors."""


class ParameterError(MstcdError, ValueError):
    """Invalid configuration value or operation parameter."""


class DimensionMismatchError(ParameterError):
    """Vectors of different dimensionality were combined."""


class DegenerateEdgeError(MstcdError, ValueError):
    """Edge endpoints coincide, so the projection is undefined."""


class GraphError(MstcdError, ValueError):
    """Graph or tree construction violated a structural requirement."""


class DataFormatError(MstcdError, ValueError):
    """A dataset file or dataset contents could not be used."""
