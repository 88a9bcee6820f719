"""Sharp constants and numerical verification of weighted fractional Hardy inequalities."""

from .constants import (constant_C, constant_C_closed_p2, constant_C_s0, constant_D,
                        constant_D_closed_p2, constant_D_s0, remainder_coeff, sharp_constant)
from .core import (ConstantReport, HardyError, HardyParams, Method, NumericalError, QuadResult,
                   Regime, ValidationError, validate)
from .geometry import ConvexBody, pseudo_distance_m
from .profiles import ProfileFunction, ProfileKind

__version__ = "0.1.0"

__all__ = [
    "ConstantReport", "ConvexBody", "HardyError", "HardyParams", "Method", "NumericalError",
    "ProfileFunction", "ProfileKind", "QuadResult", "Regime", "ValidationError",
    "constant_C", "constant_C_closed_p2", "constant_C_s0", "constant_D", "constant_D_closed_p2",
    "constant_D_s0", "pseudo_distance_m", "remainder_coeff", "sharp_constant", "validate",
]
