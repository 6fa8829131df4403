from .config import MagicConfig
from .errors import (
    BadSplit,
    ComplexUnsupported,
    ConfigError,
    Defective,
    DegenerateFit,
    DriftFlowError,
    DriftFlowWarning,
    NoConvergence,
    Nonfinite,
    NonSymmetric,
    NotEquilibrium,
    NotPiecewiseLinear,
    SchemeRequiresZeroSum,
    ShapeMismatch,
    SingularArgument,
    UnknownPreset,
    ZeroCoordinate,
    ZeroGradient,
)

__all__ = [
    'MagicConfig',
    'DriftFlowError',
    'DriftFlowWarning',
    'NonSymmetric',
    'NoConvergence',
    'Defective',
    'SingularArgument',
    'ComplexUnsupported',
    'Nonfinite',
    'ZeroGradient',
    'ZeroCoordinate',
    'ShapeMismatch',
    'BadSplit',
    'NotEquilibrium',
    'SchemeRequiresZeroSum',
    'NotPiecewiseLinear',
    'DegenerateFit',
    'ConfigError',
    'UnknownPreset',
]
