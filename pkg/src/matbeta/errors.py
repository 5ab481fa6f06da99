"""Shared exception types."""


class MatbetaError(Exception):
    pass


class DomainError(MatbetaError):
    """Parameters violate an identity's validity predicate."""


class PoleError(DomainError):
    """Evaluation requested exactly at a pole."""


class EngineError(MatbetaError):
    """An integration engine could not produce a usable result."""


class NonConvergenceError(EngineError):
    """Quadrature failed to reach the requested tolerance within budget."""


class DegenerateWeightsError(EngineError):
    """Importance weights collapsed; too few samples carry mass."""


class CalibrationError(MatbetaError):
    """Cross-checked constant calibration routes disagree."""


class InterlacingError(MatbetaError):
    """Corner spectra violate interlacing beyond numerical tolerance."""
