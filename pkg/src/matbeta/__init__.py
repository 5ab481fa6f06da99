"""Numerical verification of matrix beta-integral identities over R, C, H."""

from .engine import (MCEstimate, QuadEstimate, VerificationReport, assess,
                     mc_integrate, quad_adaptive)
from .errors import (CalibrationError, DegenerateWeightsError, DomainError,
                     EngineError, InterlacingError, MatbetaError,
                     NonConvergenceError, PoleError)
from .proposals import importance_weights, importance_weights_log
from .registry import get_identity, identity_ids, verify

__version__ = "0.1.0"

__all__ = [
    "MCEstimate", "QuadEstimate", "VerificationReport", "assess",
    "mc_integrate", "quad_adaptive",
    "CalibrationError", "DegenerateWeightsError", "DomainError",
    "EngineError", "InterlacingError", "MatbetaError",
    "NonConvergenceError", "PoleError",
    "importance_weights", "importance_weights_log",
    "get_identity", "identity_ids", "verify",
    "__version__",
]
