"""Exception hierarchy shared by the engine and the command line."""


class SpinYieldError(Exception):
    """Base class for all package errors."""


class ValidationError(SpinYieldError, ValueError):
    """An input violates a documented invariant."""


class UnsupportedConfigurationError(SpinYieldError, ValueError):
    """The requested combination of options is outside the supported model."""


class ResolutionError(SpinYieldError, ValueError):
    """A time step is too coarse for the fastest frequency in the problem."""


class NumericalError(SpinYieldError, ArithmeticError):
    """A linear solve or decomposition failed."""
