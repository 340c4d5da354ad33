"""
Exception hierarchy. Every error carries the process exit code the CLI reports.
"""


class STAError(Exception):
    """Base class for all sta_designer errors."""

    exit_code = 1


class ConfigError(STAError):
    """Invalid or unknown configuration."""

    exit_code = 2


class NumericalError(STAError):
    """A numerical procedure could not produce a trustworthy result."""

    exit_code = 3


class DomainError(NumericalError):
    """Argument outside the mathematical domain (e.g. non-positive width)."""


class NoPositiveRoot(NumericalError):
    """A boundary-width quartic has no positive root in the searched bracket."""

    def __init__(self, message: str, bracket: tuple = None):
        super().__init__(message)
        self.bracket = bracket


class CollapseError(NumericalError):
    """The width crossed the collapse floor during integration."""

    def __init__(self, message: str, time: float = None, width: float = None):
        super().__init__(message)
        self.time = time
        self.width = width


class StepFailure(NumericalError):
    """The adaptive step controller stalled."""


class QuadratureFailure(NumericalError):
    """A turning-point integral has a non-positive radicand in its interior."""

    def __init__(self, message: str, location: float = None):
        super().__init__(message)
        self.location = location


class InvalidSwitch(NumericalError):
    """The bang-bang switching width is complex or outside (a_i, a_f)."""


class NonConvergence(NumericalError):
    """Imaginary-time relaxation hit its step budget."""


class NoGroundState(NumericalError):
    """A non-confining trap has no normalizable ground state."""


class NormDrift(NumericalError):
    """Real-time evolution lost norm beyond tolerance."""


class GridMismatch(NumericalError):
    """Two wave fields live on different grids."""
