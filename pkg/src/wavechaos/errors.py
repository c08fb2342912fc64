"""Exception hierarchy shared by all modules."""


class WaveChaosError(Exception):
    """Base class for every error raised by the package."""


class InvalidParameter(WaveChaosError, ValueError):
    pass


class SingularityError(WaveChaosError, ValueError):
    """A kernel was evaluated exactly at one of its poles."""


class UnsupportedEvaluation(WaveChaosError, TypeError):
    pass


class QuadratureError(WaveChaosError, ArithmeticError):
    def __init__(self, message, achieved=None):
        super().__init__(message)
        self.achieved = achieved


class MCDiagnosticError(WaveChaosError, ArithmeticError):
    def __init__(self, message, ratios=None):
        super().__init__(message)
        self.ratios = ratios


class InvalidGram(WaveChaosError, ValueError):
    pass


class DivergenceError(WaveChaosError, ArithmeticError):
    """The requested integral is infinite; ``verdict`` holds the diagnostics."""

    def __init__(self, message, verdict=None):
        super().__init__(message)
        self.verdict = verdict
