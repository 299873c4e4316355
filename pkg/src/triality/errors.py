"""Exception types raised by the toolkit."""


class TrialityError(ValueError):
    """Base class for all validation failures in this package."""


class NotHermitian(TrialityError):
    pass


class NotPSD(TrialityError):
    pass


class InvalidState(TrialityError):
    """A state or density matrix violates normalization, trace or positivity."""


class InvalidProbabilities(TrialityError):
    pass


class InvalidNoiseModel(TrialityError):
    pass


class MissingSetting(TrialityError):
    """A tomography run lacks counts for one of the nine basis settings."""


class InsufficientData(TrialityError):
    pass
