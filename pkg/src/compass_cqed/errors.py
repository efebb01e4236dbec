"""Exception and warning types raised across the package."""


class CompassError(Exception):
    """Base class for all package errors."""


class DegenerateState(CompassError):
    """The superposition has (numerically) zero norm."""


class NotNormalized(CompassError):
    """An operation that needs a unit-norm state received something else."""


class CutoffTooSmall(CompassError, UserWarning):
    """Fock truncation discards more norm than tolerated.

    Emitted as a warning by :func:`compass_cqed.states.to_fock` and raised
    as an error by the numeric oracles.
    """


class GridTooCoarse(CompassError):
    pass


class DimensionMismatch(CompassError):
    pass


class PhaseConditionViolated(CompassError):
    pass


class ZeroDetuning(CompassError):
    pass


class ZeroAmplitude(CompassError):
    pass


class StepTooLarge(CompassError):
    pass


class NoRevivalFound(CompassError):
    pass
