"""Exception hierarchy shared by every module."""


class DeltaKitError(Exception):
    """Base class for all engine errors."""


class InvalidScenario(DeltaKitError):
    """Malformed input: bad rationals, dangling names, asymmetric Gram, ..."""


class NotPseudoeffective(DeltaKitError):
    """The class has no Zariski decomposition over the listed curves."""


class NotNefInput(DeltaKitError):
    """A sweep family fails nefness at an endpoint of its interval."""


class DegenerateFamily(DeltaKitError):
    """The family never leaves the pseudoeffective cone, or t(u) jumps."""


class Discontinuity(DeltaKitError, ValueError):
    """A piecewise function flagged continuous has mismatched pieces."""


class DiscontinuousVolume(Discontinuity):
    """Volume pieces disagree at a chamber join."""


class ZeroArea(DeltaKitError):
    """Barycenter requested for a body of zero area."""


class InvariantViolation(DeltaKitError):
    """An internal postcondition failed. Always a bug or inconsistent data."""


class NegativeOrdIntegrand(UserWarning):
    """The point multiplicity integrand dips below zero somewhere."""
