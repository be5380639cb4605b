"""Error types for the accelerating beam toolkit."""

from typing import Any, Optional, Sequence


def _fmt_point(point: Optional[Sequence[float]]) -> str:
    if point is None:
        return "<unknown>"
    return "(" + ", ".join(f"{float(c):.6g}" for c in point) + ")"


class BeamError(Exception):
    """Base error class for beam construction and verification."""

    def __init__(self, message: str, recoverable: bool = True):
        super().__init__(message)
        self.message = message
        self.recoverable = recoverable


class DomainError(BeamError):
    """Error raised when a point violates a coordinate or domain guard.

    The ``constraint`` names the guard (``"r > r_min"``, ``"theta in (0, pi)"``,
    ``"|x| > r_min"`` ...) so callers can aggregate failures by cause.
    """

    def __init__(self, constraint: str, point: Optional[Sequence[float]] = None, message: str = None):
        if message is None:
            message = f"Domain violation: {constraint} at point {_fmt_point(point)}"
        super().__init__(message, recoverable=True)
        self.constraint = constraint
        self.point = None if point is None else tuple(float(c) for c in point)


class FieldEvaluationError(BeamError):
    """Error raised when a field returns a non-finite value on a stencil."""

    def __init__(self, point: Sequence[float], detail: str = "non-finite field value"):
        message = f"Field evaluation failed at {_fmt_point(point)}: {detail}"
        super().__init__(message, recoverable=True)
        self.point = tuple(float(c) for c in point)
        self.detail = detail
        self.constraint = "finite field value"


class ParameterError(BeamError):
    """Error raised when a construction parameter is out of range."""

    def __init__(self, name: str, value: Any, reason: str):
        message = f"Invalid parameter '{name}'={value!r}: {reason}"
        super().__init__(message, recoverable=False)
        self.name = name
        self.value = value
        self.reason = reason


class MediumError(BeamError):
    """Error raised when a medium profile is non-physical at a point."""

    def __init__(self, point: Sequence[float], detail: str):
        message = f"Non-physical medium at {_fmt_point(point)}: {detail}"
        super().__init__(message, recoverable=False)
        self.point = tuple(float(c) for c in point)
        self.detail = detail


class DegenerateGradientError(BeamError):
    """Error raised when a Carleman weight has a vanishing gradient."""

    def __init__(self, point: Sequence[float], norm: float):
        message = f"Gradient norm {norm:.3e} below threshold at {_fmt_point(point)}"
        super().__init__(message, recoverable=False)
        self.point = tuple(float(c) for c in point)
        self.norm = norm


class SingularJacobianError(BeamError):
    """Error raised when a push-forward map has a singular Jacobian."""

    def __init__(self, point: Sequence[float], determinant: float = 0.0):
        message = f"Singular Jacobian (det={determinant:.3e}) at {_fmt_point(point)}"
        super().__init__(message, recoverable=False)
        self.point = tuple(float(c) for c in point)
        self.determinant = determinant


class SamplingError(BeamError):
    """Error raised when too many grid points fall outside the field domain."""

    def __init__(self, missing_fraction: float, worst_constraint: str, limit: float = 0.05):
        message = (
            f"{missing_fraction:.1%} of grid points missing (limit {limit:.0%}); "
            f"most frequent violation: {worst_constraint}"
        )
        super().__init__(message, recoverable=False)
        self.missing_fraction = missing_fraction
        self.worst_constraint = worst_constraint


class ExportError(BeamError):
    """Error raised when an artifact cannot be written."""

    def __init__(self, destination: str, cause: Exception):
        message = f"Cannot write '{destination}': {cause}"
        super().__init__(message, recoverable=False)
        self.destination = str(destination)
        self.cause = cause


class RenderError(BeamError):
    """Error raised when a raster cannot be turned into an image."""

    def __init__(self, reason: str):
        super().__init__(f"Render failed: {reason}", recoverable=False)
        self.reason = reason


class VerificationError(BeamError):
    """Error raised when a verification run cannot produce a result."""

    def __init__(self, reason: str):
        super().__init__(f"Verification aborted: {reason}", recoverable=False)
        self.reason = reason


class ConfigError(BeamError, ValueError):
    """Error raised for invalid or missing run configuration."""

    def __init__(self, message: str):
        super().__init__(message, recoverable=False)


class OutsideAnnulusWarning(UserWarning):
    """Virtual-space point lies in the cutoff shell outside the annulus."""


class BranchCutWarning(UserWarning):
    """Evaluation point is close to the branch cut of log(x1 - i r)."""
