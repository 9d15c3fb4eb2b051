"""Exception hierarchy for tonelab."""


class ToneLabError(Exception):
    """Base class for all tonelab errors."""


class DomainError(ToneLabError, ValueError):
    """An argument lies outside the domain where the quantity is defined."""


class InputError(ToneLabError, ValueError):
    """Malformed input: wrong shape, non-positive field, bad grid size."""


class ConvergenceError(ToneLabError, RuntimeError):
    """An iterative solver stopped before meeting its tolerance.

    ``diagnostics`` carries whatever state is useful for a post-mortem
    (final bracket, iteration count, residual).
    """

    def __init__(self, message, **diagnostics):
        super().__init__(message)
        self.diagnostics = diagnostics


class PositivityFailure(ToneLabError):
    """The linearized elliptic solve produced ``f <= 0`` somewhere inside."""

    def __init__(self, message, min_f=None):
        super().__init__(message)
        self.min_f = min_f
