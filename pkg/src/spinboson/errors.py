"""Exception hierarchy.

Everything numerical derives from :class:`NumericalError` so the CLI can map
it to exit code 1; bad user input raises :class:`ValueError` subclasses.
"""


class SpinBosonError(Exception):
    pass


class ParameterError(SpinBosonError, ValueError):
    pass


class NumericalError(SpinBosonError):
    pass


class ConvergenceError(NumericalError):
    """Fixed-point solver failed; carries the last two iterates."""

    def __init__(self, msg, last_iterates=None):
        super().__init__(msg)
        self.last_iterates = last_iterates


class SingularityError(NumericalError, ValueError):
    pass


class AmbiguousRootError(NumericalError):
    def __init__(self, msg, brackets):
        super().__init__(msg)
        self.brackets = list(brackets)


class UnsupportedRegimeError(NumericalError):
    pass


class QuadratureError(NumericalError):
    def __init__(self, msg, estimate=None, error=None, t=None):
        super().__init__(msg)
        self.estimate = estimate
        self.error = error
        self.t = t


class InvalidStateError(NumericalError):
    pass


class StepSizeError(NumericalError):
    pass


class DimensionError(NumericalError):
    pass


class NormDriftError(NumericalError):
    pass
