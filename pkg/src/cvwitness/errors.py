"""Exception types raised by cvwitness."""


class CvWitnessError(Exception):
    """Base class for every error raised by this package."""


class DomainError(CvWitnessError, ValueError):
    """A parameter lies outside the domain of an operation."""


class TruncationLoss(CvWitnessError):
    """The Fock cutoff cannot hold the state within the tail tolerance."""


class WeightError(CvWitnessError, ValueError):
    """Mixture weights are negative or do not sum to one."""


class ShapeError(CvWitnessError, ValueError):
    """States with mismatched cutoffs were combined."""


class DegenerateNorm(CvWitnessError):
    """A superposition collapsed to (nearly) the zero vector."""


class DegenerateModeError(CvWitnessError):
    """Exactly one mode is in vacuum, so the optimal EPR scale diverges."""
