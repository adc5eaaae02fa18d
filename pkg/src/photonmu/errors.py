"""Exception types shared across the package."""


class PhotonmuError(Exception):
    """Base class for all package-specific errors."""


class CapacityError(PhotonmuError):
    """Requested object exceeds a configured size cap."""


class ConsistencyError(PhotonmuError):
    """Inputs violate a structural assumption (e.g. operators that must commute do not)."""


class DegeneracyError(PhotonmuError):
    """Stationary state is not unique (disconnected transition graph)."""

    def __init__(self, message, components=None):
        super().__init__(message)
        self.components = components or []


class SolverError(PhotonmuError):
    """Numerical solve did not reach the requested tolerance."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class SingularityError(PhotonmuError):
    """A ratio chain hit a vanishing denominator."""


class BreakdownError(PhotonmuError):
    """Thermal description breaks down (loss too strong relative to the bath coupling)."""


class IntegrationError(PhotonmuError):
    """Numerical integration failed to meet its accuracy target."""

    def __init__(self, message, achieved=None):
        super().__init__(message)
        self.achieved = achieved


class FitQualityError(PhotonmuError):
    """A trajectory does not support the requested fit."""
