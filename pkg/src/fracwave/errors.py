"""Exception hierarchy shared by all fracwave modules."""


class FracwaveError(Exception):
    """Base class for every error raised by this package."""


class DomainError(FracwaveError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class EvaluationError(FracwaveError, ArithmeticError):
    """A numerical procedure failed to converge.

    Carries the offending parameters so callers can report them.
    """

    def __init__(self, message, **params):
        self.params = params
        if params:
            detail = ", ".join(f"{k}={v!r}" for k, v in params.items())
            message = f"{message} ({detail})"
        super().__init__(message)


class ShapeError(FracwaveError, ValueError):
    """Array sizes do not match the domain they are paired with."""


class ConfigurationError(FracwaveError, ValueError):
    """An experiment or solver configuration is inconsistent.

    ``key`` names the offending configuration entry when known.
    """

    def __init__(self, message, key=None):
        self.key = key
        if key is not None:
            message = f"{key}: {message}"
        super().__init__(message)
