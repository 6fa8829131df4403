from typing import Optional


class DriftFlowError(Exception):
    """Base class of every error raised by driftflow."""


class DriftFlowWarning(UserWarning):
    """Base class of the warnings emitted by driftflow."""


class NonSymmetric(DriftFlowError, ValueError):
    pass


class NoConvergence(DriftFlowError):
    pass


class Defective(DriftFlowError):
    """The matrix is not diagonalizable (Jordan blocks are not supported)."""


class SingularArgument(DriftFlowError, ValueError):
    """``1 - h * lambda`` vanishes, the principal log is undefined."""


class ComplexUnsupported(DriftFlowError, TypeError):
    pass


class Nonfinite(DriftFlowError, FloatingPointError):
    """
    A state, field or loss became NaN or infinite.

    ``where`` is the offending time (flows) or iteration index (loops).
    """

    def __init__(self, message: str, where: Optional[float] = None):
        super().__init__(message)
        self.where = where


class ZeroGradient(DriftFlowError, ValueError):
    pass


class ZeroCoordinate(DriftFlowWarning):
    """A per-parameter drift coordinate vanished, the rate cap was used."""


class ShapeMismatch(DriftFlowError, ValueError):
    pass


class BadSplit(DriftFlowError, ValueError):
    pass


class NotEquilibrium(DriftFlowError, ValueError):
    pass


class SchemeRequiresZeroSum(DriftFlowError, ValueError):
    pass


class NotPiecewiseLinear(DriftFlowError, ValueError):
    pass


class DegenerateFit(DriftFlowError, ValueError):
    pass


class ConfigError(DriftFlowError, ValueError):
    pass


class UnknownPreset(DriftFlowError, KeyError):
    pass
