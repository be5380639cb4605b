"""Complex vector algebra, coordinates and finite-difference operators.

Fields are plain callables taking a Cartesian point (numpy array of shape
(3,)) and returning a complex scalar or a complex array. Eight-vectors use the
block convention X = (s1, V1, s2, V2) with V1, V2 three-vectors.
"""

from typing import Any, Callable, NamedTuple, Optional, Sequence, Tuple, Union

import numpy as np

from src.lib.logging_config import get_logger
from src.models.error_types import DomainError, FieldEvaluationError, ParameterError
from src.models.params import FDScheme

logger = get_logger(__name__)

R_MIN = 1e-6
DEFAULT_SCHEME = FDScheme()
KINDS = ("grad", "div", "curl", "laplacian")

Complex3 = np.ndarray
Complex8 = np.ndarray
Point3 = np.ndarray
Field = Callable[[np.ndarray], Any]

_EYE = np.eye(3)


class CylPoint(NamedTuple):
    """Cylindrical coordinates (x1, r, theta) with x2 = r cos(theta), x3 = r sin(theta)."""

    x1: float
    r: float
    theta: float

    @property
    def z(self) -> complex:
        """Complex coordinate x1 + i r."""
        return complex(self.x1, self.r)


# ============================================================================
# Algebra helpers
# ============================================================================

def as_point(p: Sequence[float]) -> Point3:
    x = np.asarray(p, dtype=float).reshape(3)
    if not np.all(np.isfinite(x)):
        raise DomainError("finite coordinates", x)
    return x


def bilinear_dot(u: np.ndarray, v: np.ndarray) -> complex:
    """Complex bilinear (not Hermitian) dot product."""
    return complex(np.sum(np.asarray(u) * np.asarray(v)))


def cross_matrix(v: Sequence[complex]) -> np.ndarray:
    """Matrix [v]x with [v]x @ w == v x w."""
    a, b, c = np.asarray(v, dtype=complex)
    return np.array([[0, -c, b], [c, 0, -a], [-b, a, 0]], dtype=complex)


def assemble8(s1: complex, v1: Sequence[complex], s2: complex, v2: Sequence[complex]) -> Complex8:
    """Stack (s1, V1, s2, V2) into an eight-vector."""
    out = np.empty(8, dtype=complex)
    out[0] = s1
    out[1:4] = np.asarray(v1, dtype=complex)
    out[4] = s2
    out[5:8] = np.asarray(v2, dtype=complex)
    return out


def split8(x: Complex8) -> Tuple[complex, Complex3, complex, Complex3]:
    x = np.asarray(x, dtype=complex)
    if x.shape != (8,):
        raise ParameterError("x", x.shape, "eight-vector must have shape (8,)")
    return complex(x[0]), x[1:4].copy(), complex(x[4]), x[5:8].copy()


# ============================================================================
# Coordinates
# ============================================================================

def cart_cyl(p: Sequence[float], r_min: float = R_MIN) -> CylPoint:
    """Cartesian to cylindrical about the x1 axis; theta in (-pi, pi].

    Raises:
        DomainError: If the point lies within r_min of the x1 axis
    """
    x = as_point(p)
    r = float(np.hypot(x[1], x[2]))
    if r <= r_min:
        raise DomainError("r > r_min", x)
    theta = float(np.arctan2(x[2], x[1]))
    if theta == -np.pi:
        theta = np.pi
    return CylPoint(float(x[0]), r, theta)


def cyl_cart(c: CylPoint) -> Point3:
    return np.array([c.x1, c.r * np.cos(c.theta), c.r * np.sin(c.theta)])


def cylindrical_frame(theta: float) -> Tuple[np.ndarray, np.ndarray]:
    """Unit vectors (r_hat, theta_hat) in Cartesian components."""
    c, s = np.cos(theta), np.sin(theta)
    return np.array([0.0, c, s]), np.array([0.0, -s, c])


def as_cartesian(f_cyl: Callable[[CylPoint], Any], r_min: float = R_MIN) -> Field:
    """Adapt a field of cylindrical points to a field of Cartesian points."""
    return lambda x: f_cyl(cart_cyl(x, r_min))


# ============================================================================
# Finite differences
# ============================================================================

def _evaluate(field: Field, x: np.ndarray) -> np.ndarray:
    value = np.asarray(field(x), dtype=complex)
    if not np.all(np.isfinite(value)):
        raise FieldEvaluationError(x)
    return value


def jacobian(field: Field, p: Sequence[float], scheme: FDScheme = DEFAULT_SCHEME) -> np.ndarray:
    """Central-difference derivative matrix J[i, j] = d field_i / d x_j.

    Returns shape (3,) for scalar fields and (n, 3) for n-component fields.
    """
    x = as_point(p)
    h = scheme.step(x)
    cols = [(_evaluate(field, x + h * e) - _evaluate(field, x - h * e)) / (2 * h) for e in _EYE]
    return np.stack(cols, axis=-1)


def hessian(field: Field, p: Sequence[float], scheme: FDScheme = DEFAULT_SCHEME) -> np.ndarray:
    """Second-order central-difference Hessian of a scalar field."""
    x = as_point(p)
    h = scheme.step(x)
    f0 = _evaluate(field, x)
    if f0.ndim != 0:
        raise ParameterError("field", f0.shape, "hessian needs a scalar field")
    hess = np.empty((3, 3), dtype=complex)
    for i in range(3):
        ei = h * _EYE[i]
        hess[i, i] = (_evaluate(field, x + ei) - 2 * f0 + _evaluate(field, x - ei)) / (h * h)
        for j in range(i + 1, 3):
            ej = h * _EYE[j]
            mixed = (
                _evaluate(field, x + ei + ej)
                - _evaluate(field, x + ei - ej)
                - _evaluate(field, x - ei + ej)
                + _evaluate(field, x - ei - ej)
            ) / (4 * h * h)
            hess[i, j] = hess[j, i] = mixed
    return hess


def laplacian(field: Field, p: Sequence[float], scheme: FDScheme = DEFAULT_SCHEME) -> np.ndarray:
    """Componentwise 7-point Laplacian."""
    x = as_point(p)
    h = scheme.step(x)
    f0 = _evaluate(field, x)
    acc = np.zeros_like(f0)
    for e in _EYE:
        acc = acc + _evaluate(field, x + h * e) - 2 * f0 + _evaluate(field, x - h * e)
    return acc / (h * h)


def differential(
    field: Field,
    kind: str,
    p: Sequence[float],
    scheme: FDScheme = DEFAULT_SCHEME,
) -> Union[np.ndarray, complex]:
    """Apply grad, div, curl or laplacian to a field at p by central differences.

    Args:
        field: Callable of a Cartesian point returning a scalar or a 3-vector
        kind: One of "grad", "div", "curl", "laplacian"
        p: Evaluation point
        scheme: Finite-difference scheme

    Returns:
        Complex 3-vector (grad of a scalar, curl), Jacobian (grad of a vector),
        or complex scalar (div, laplacian of a scalar)

    Raises:
        ParameterError: If the kind is unknown or does not match the field arity
        FieldEvaluationError: If the field is not finite on the stencil
    """
    if kind not in KINDS:
        raise ParameterError("kind", kind, f"expected one of {', '.join(KINDS)}")
    if kind == "laplacian":
        out = laplacian(field, p, scheme)
        return complex(out) if out.ndim == 0 else out
    jac = jacobian(field, p, scheme)
    if kind == "grad":
        return jac
    if jac.shape != (3, 3):
        raise ParameterError("field", jac.shape, f"{kind} needs a three-component field")
    if kind == "div":
        return complex(np.trace(jac))
    return np.array([jac[2, 1] - jac[1, 2], jac[0, 2] - jac[2, 0], jac[1, 0] - jac[0, 1]])


def cyl_gradient(
    f: Callable[[CylPoint], Any],
    p: CylPoint,
    scheme: FDScheme = DEFAULT_SCHEME,
    r_min: float = R_MIN,
    theta_range: Optional[Tuple[float, float]] = None,
) -> Complex3:
    """Cartesian gradient of a function of (x1, r, theta).

    Partials are taken in cylindrical coordinates and combined as
    (d1 f, cos d_r f - sin/r d_theta f, sin d_r f + cos/r d_theta f).
    With ``theta_range`` the angular step shrinks so the stencil stays
    strictly inside the open interval.

    Raises:
        DomainError: If p.r <= r_min, or p.theta is outside theta_range
    """
    if p.r <= r_min:
        raise DomainError("r > r_min", cyl_cart(p))
    h = scheme.step(cyl_cart(p))
    h_r = min(h, 0.5 * (p.r - r_min))
    h_t = h / p.r
    if theta_range is not None:
        lo, hi = theta_range
        if not lo < p.theta < hi:
            raise DomainError(f"theta in ({lo:g}, {hi:g})", cyl_cart(p))
        h_t = min(h_t, 0.5 * (p.theta - lo), 0.5 * (hi - p.theta))

    def at(dx1: float, dr: float, dt: float) -> complex:
        q = CylPoint(p.x1 + dx1, p.r + dr, p.theta + dt)
        value = complex(f(q))
        if not np.isfinite(value):
            raise FieldEvaluationError(cyl_cart(q))
        return value

    d1 = (at(h, 0, 0) - at(-h, 0, 0)) / (2 * h)
    dr = (at(0, h_r, 0) - at(0, -h_r, 0)) / (2 * h_r)
    dt = (at(0, 0, h_t) - at(0, 0, -h_t)) / (2 * h_t)
    c, s = np.cos(p.theta), np.sin(p.theta)
    return np.array([d1, c * dr - s / p.r * dt, s * dr + c / p.r * dt], dtype=complex)


def observed_order(err_coarse: float, err_fine: float, refinement: float = 2.0) -> float:
    """Convergence order log(err(h) / err(h / refinement)) / log(refinement)."""
    if err_coarse <= 0 or err_fine <= 0:
        raise ParameterError("errors", (err_coarse, err_fine), "must be > 0 to measure an order")
    return float(np.log(err_coarse / err_fine) / np.log(refinement))


__all__ = [
    "R_MIN",
    "DEFAULT_SCHEME",
    "CylPoint",
    "as_point",
    "bilinear_dot",
    "cross_matrix",
    "assemble8",
    "split8",
    "cart_cyl",
    "cyl_cart",
    "cylindrical_frame",
    "as_cartesian",
    "jacobian",
    "hessian",
    "laplacian",
    "differential",
    "cyl_gradient",
    "observed_order",
]
