"""Exception types raised by the solvers and oracles.

Every error derives from :class:`DeltaError`, so callers (the CLI in
particular) can catch one base class and report ``type(err).__name__``.
"""


class DeltaError(Exception):
    """Base class for all solver and verification errors."""


class ZeroAmplitude(DeltaError):
    pass


class NoBoundState(DeltaError):
    pass


class NonConfining(DeltaError):
    pass


class NotConfining(DeltaError):
    pass


class SingularMatching(DeltaError):
    pass


class PoleAtG(DeltaError):
    pass


class DegenerateCoupling(DeltaError):
    pass


class ZeroStrength(DeltaError):
    pass


class NotStationary(DeltaError):
    pass


class InconsistentEnergy(DeltaError):
    pass


class DivergentNorm(DeltaError):
    pass


class QuadratureFailure(DeltaError):
    pass


class GridTooCoarse(DeltaError):
    pass


class DiscontinuousAtZero(DeltaError):
    pass
