"""Exception types shared across the package."""


class MotionFieldsError(Exception):
    """Base class for all package errors."""


class UnknownInstance(MotionFieldsError):
    """Requested symmetric-pair instance is not in the catalog."""


class StratumMismatch(MotionFieldsError):
    """Irrep label does not belong to the stabilizer of the given point."""


class EpsilonTooLarge(MotionFieldsError):
    """Neighborhood radius violates the stabilizer-containment hypothesis."""


class MixedInstance(MotionFieldsError):
    """Dual points from different instances mixed in one query."""


class EmptySequence(MotionFieldsError):
    """Convergence query on an empty sequence."""


class EmptyBasis(MotionFieldsError):
    """No K-type below the cutoff branches over the requested irrep."""


class NonIntegerMultiplicity(MotionFieldsError):
    """Branching quadrature returned a value too far from an integer."""


class QuadratureOrderTooLow(MotionFieldsError):
    """Refinement check moved matrix entries beyond tolerance."""


class PathCrossesStrata(MotionFieldsError):
    """Continuity path leaves the stratum it started in."""


class MissingGamma2Data(MotionFieldsError):
    """Operator-field sample lacks the K-dual entries needed here."""


class ConfigError(MotionFieldsError):
    """Scenario configuration failed validation."""

    def __init__(self, field, message):
        self.field = field
        super().__init__(f"{field}: {message}")
