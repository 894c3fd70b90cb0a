"""Exception types raised by the solver and its front ends."""


class LifecoverError(ValueError):
    """Base class for all domain errors."""


class InvalidParameter(LifecoverError):
    """A market or household parameter violates its admissible range."""


class PremiumNotViable(LifecoverError):
    """Single premium would be at least $1 per $1 of benefit."""


class LossProbabilityTooHigh(LifecoverError):
    """Target loss probability implies a premium below the actuarially fair one."""


class NoSolution(LifecoverError):
    """Willingness to pay is outside the solvable range for risk aversion."""


class InteriorOptimumRequired(LifecoverError):
    """Operation needs a strictly positive optimal death benefit."""


class SingularParameter(LifecoverError):
    """Inputs sit on a degenerate locus where a formula is undefined."""


class VerificationFailed(LifecoverError):
    """Numerical optimality verification found an offending grid point."""

    def __init__(self, message: str, worst: dict | None = None):
        super().__init__(message)
        self.worst = worst or {}


class ConfigInvalid(LifecoverError):
    """A config document or simulation setting failed validation."""

    def __init__(self, message: str, field: str | None = None):
        super().__init__(message)
        self.field = field
