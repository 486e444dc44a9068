"""Exception hierarchy.

Validation-style errors carry the measured residual so callers (and the CLI)
can report how far off an input was.
"""


class ShfError(Exception):
    """Base class for all package errors."""

    def __init__(self, message, residual=None, **details):
        super().__init__(message)
        self.residual = residual
        self.details = details


class DegreeError(ShfError):
    pass


class MetricError(ShfError):
    pass


class VolumeError(ShfError):
    pass


class InternalInconsistency(ShfError):
    """Raised when an identity that must hold for every input fails."""


class NotNegativeOrbit(ShfError):
    pass


class NotComplexStructure(ShfError):
    pass


class DegenerateOmega(ShfError):
    pass


class CompatibilityError(ShfError):
    pass


class NormalizationError(ShfError):
    pass


class NotSHFConsistent(ShfError):
    pass


class TorsionDecompositionError(ShfError):
    pass


class LieDataError(ShfError):
    """Structure constants violate antisymmetry, Jacobi, reductivity or Killing checks."""


class RootNormalizationError(ShfError):
    pass


class NotAdmissible(ShfError):
    pass


class ConvergenceError(ShfError):
    def __init__(self, message, best=None, residual=None):
        super().__init__(message, residual=residual)
        self.best = best
