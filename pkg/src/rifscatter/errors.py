"""Exception hierarchy shared by all modules."""


class RifError(Exception):
    """Base class for every error raised by the package."""


class ConfigError(RifError):
    pass


class ComputeError(RifError):
    """Wraps a failure from the numerical core with the parameters that caused it."""

    def __init__(self, message, **context):
        self.context = context
        if context:
            details = ", ".join(f"{k}={v!r}" for k, v in context.items())
            message = f"{message} ({details})"
        super().__init__(message)


class DegenerateRoot(ComputeError):
    pass


class ZeroDenominator(ComputeError):
    pass


class LabelAmbiguity(ComputeError):
    pass


class BoundaryFrequency(ComputeError):
    pass


class NoHorizon(ComputeError):
    pass


class NullSpaceDimension(ComputeError):
    pass


class ResonanceError(ComputeError):
    pass


class SingularBasis(ComputeError):
    pass


class InconsistentScenario(ComputeError):
    pass


class SigmaSingular(ComputeError):
    pass


class GridTooCoarse(ComputeError):
    pass


class NarrowbandViolated(ComputeError):
    pass


class ZeroGroupVelocity(ComputeError):
    pass


class NoContribution(ComputeError):
    pass


class RangeTooNarrow(ComputeError):
    pass
