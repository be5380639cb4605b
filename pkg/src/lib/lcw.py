"""Limiting Carleman weights and the CGO phase/amplitude machinery.

A phase is the complex function phi + i psi. Three kinds are supported:
linear (zeta . x), cylindrical l(z) = -z and logarithmic l(z_bar) = -log z_bar,
with z = x1 + i r.
"""

from dataclasses import dataclass
from typing import Callable, Optional, Sequence, Tuple, Union

import numpy as np

from src.lib.fieldcore import (
    DEFAULT_SCHEME,
    R_MIN,
    CylPoint,
    as_point,
    bilinear_dot,
    cart_cyl,
    cyl_cart,
    cyl_gradient,
    hessian,
    jacobian,
    laplacian,
)
from src.lib.logging_config import get_logger
from src.models.error_types import DegenerateGradientError, DomainError, ParameterError
from src.models.params import FDScheme
from src.models.reports import EikonalReport

logger = get_logger(__name__)

PHASE_KINDS = ("linear", "cyl_linear", "log_bar")
GRADIENT_FLOOR = 1e-10

PhaseLike = Union["Phase", Callable[[CylPoint], complex]]
AngularProfile = Callable[[float], np.ndarray]


@dataclass(frozen=True)
class Phase:
    """A limiting Carleman weight pair phi + i psi plus the amplitude frequency lambda.

    Attributes:
        kind: "linear", "cyl_linear" or "log_bar"
        zeta: Complex direction of a linear phase (zeta . zeta = 0 or -k^2)
        lam: Amplitude frequency lambda >= 0
        k: Wave number admitted by the Helmholtz variant of a linear phase
    """

    kind: str
    zeta: Optional[Tuple[complex, complex, complex]] = None
    lam: float = 0.0
    k: float = 0.0

    def __post_init__(self):
        if self.kind not in PHASE_KINDS:
            raise ParameterError("kind", self.kind, f"expected one of {', '.join(PHASE_KINDS)}")
        if self.lam < 0:
            raise ParameterError("lam", self.lam, "must be >= 0")
        if self.kind == "linear":
            if self.zeta is None:
                raise ParameterError("zeta", None, "a linear phase needs a direction")
            zeta = np.asarray(self.zeta, dtype=complex)
            defect = bilinear_dot(zeta, zeta) + self.k ** 2
            if abs(defect) > 1e-12 * max(1.0, float(np.vdot(zeta, zeta).real)):
                raise ParameterError("zeta", self.zeta, f"zeta.zeta must equal -k^2 (defect {abs(defect):.3e})")

    @classmethod
    def linear(cls, zeta: Sequence[complex], lam: float = 0.0, k: float = 0.0) -> "Phase":
        return cls("linear", tuple(complex(c) for c in zeta), lam, k)

    @classmethod
    def cylindrical(cls, lam: float = 0.0) -> "Phase":
        return cls("cyl_linear", None, lam)

    @classmethod
    def logarithmic(cls, lam: float = 0.0) -> "Phase":
        return cls("log_bar", None, lam)


def _check_domain(ph: Phase, p: CylPoint, r_min: float) -> None:
    if p.r <= r_min:
        raise DomainError("r > r_min", cyl_cart(p))
    if ph.kind == "log_bar" and not 0.0 < p.theta < np.pi:
        raise DomainError("theta in (0, pi)", cyl_cart(p))


def _as_cyl(p) -> CylPoint:
    return p if isinstance(p, CylPoint) else cart_cyl(p)


def phase_eval(ph: Phase, p: Union[CylPoint, Sequence[float]], r_min: float = R_MIN) -> complex:
    """Evaluate phi + i psi at p.

    Raises:
        DomainError: If p is on the axis or, for log_bar, outside theta in (0, pi)
    """
    if ph.kind == "linear":
        x = cyl_cart(p) if isinstance(p, CylPoint) else as_point(p)
        return bilinear_dot(np.asarray(ph.zeta, dtype=complex), x)
    c = _as_cyl(p)
    _check_domain(ph, c, r_min)
    if ph.kind == "cyl_linear":
        return -c.z
    return -np.log(complex(c.x1, -c.r))


def phase_gradient(ph: Phase, p: Union[CylPoint, Sequence[float]], r_min: float = R_MIN) -> np.ndarray:
    """Closed-form Cartesian gradient of phi + i psi (D = -i grad of it is the CGO symbol)."""
    if ph.kind == "linear":
        return np.asarray(ph.zeta, dtype=complex)
    c = _as_cyl(p)
    _check_domain(ph, c, r_min)
    grad_z = np.array([1.0, 1j * np.cos(c.theta), 1j * np.sin(c.theta)])
    if ph.kind == "cyl_linear":
        return -grad_z
    return -np.conj(grad_z) / complex(c.x1, -c.r)


def _phase_callable(ph: PhaseLike) -> Callable[[CylPoint], complex]:
    if isinstance(ph, Phase):
        return lambda q: phase_eval(ph, q)
    return ph


def check_eikonal(ph: PhaseLike, p: CylPoint, scheme: FDScheme = DEFAULT_SCHEME) -> EikonalReport:
    """Finite-difference residuals of |grad psi|^2 = |grad phi|^2 and grad phi . grad psi = 0.

    Args:
        ph: Phase, or any callable of a CylPoint returning phi + i psi
        p: Evaluation point
        scheme: Finite-difference scheme

    Returns:
        EikonalReport with both residuals
    """
    if isinstance(ph, Phase) and ph.kind == "linear":
        grad = jacobian(lambda x: phase_eval(ph, x), cyl_cart(p), scheme)
    else:
        theta_range = (0.0, np.pi) if isinstance(ph, Phase) and ph.kind == "log_bar" else None
        grad = cyl_gradient(_phase_callable(ph), p, scheme, theta_range=theta_range)
    grad_phi, grad_psi = grad.real, grad.imag
    res_norm = abs(float(grad_psi @ grad_psi - grad_phi @ grad_phi))
    res_orth = abs(float(grad_phi @ grad_psi))
    return EikonalReport(res_norm=res_norm, res_orth=res_orth)


def check_lcw(
    phi: Callable[[np.ndarray], float],
    p: Sequence[float],
    n_dirs: int = 16,
    seed: int = 0,
    scheme: FDScheme = DEFAULT_SCHEME,
) -> float:
    """Largest |<phi'' grad phi, grad phi> + <phi'' xi, xi>| over sampled xi.

    Directions xi are seeded random vectors projected onto the plane orthogonal
    to grad phi and rescaled to |grad phi|.

    Raises:
        DegenerateGradientError: If |grad phi(p)| < 1e-10
    """
    x = as_point(p)
    grad = np.real(jacobian(phi, x, scheme))
    norm = float(np.linalg.norm(grad))
    if norm < GRADIENT_FLOOR:
        raise DegenerateGradientError(x, norm)
    hess = np.real(hessian(phi, x, scheme))
    unit = grad / norm
    rng = np.random.default_rng(seed)
    base = float(grad @ hess @ grad)
    worst = 0.0
    drawn = 0
    while drawn < n_dirs:
        v = rng.standard_normal(3)
        v = v - (v @ unit) * unit
        v_norm = np.linalg.norm(v)
        if v_norm < 1e-8:
            continue
        xi = v * (norm / v_norm)
        worst = max(worst, abs(base + float(xi @ hess @ xi)))
        drawn += 1
    return worst


def amplitude_A(ph: Phase, g: AngularProfile, p: CylPoint, r_min: float = R_MIN) -> np.ndarray:
    """Transport solution (2 i r)^(-1/2) e^(i lambda z) g(theta) (z_bar for log_bar).

    The square root is the principal branch.

    Raises:
        ParameterError: For linear phases, whose amplitudes are constants
        DomainError: On axis or outside the log_bar half plane
    """
    if ph.kind == "linear":
        raise ParameterError("kind", ph.kind, "linear phases take constant amplitudes")
    _check_domain(ph, p, r_min)
    z = p.z if ph.kind == "cyl_linear" else np.conj(p.z)
    prefactor = np.exp(1j * ph.lam * z) / np.sqrt(2j * p.r)
    return prefactor * np.asarray(g(p.theta), dtype=complex)


def check_transport(
    ph: PhaseLike,
    amplitude: Callable[[CylPoint], np.ndarray],
    p: CylPoint,
    scheme: FDScheme = DEFAULT_SCHEME,
) -> float:
    """Largest component of [2 grad(phi + i psi) . grad + Laplacian(phi + i psi)] A at p."""
    phase = _phase_callable(ph)
    x = cyl_cart(p)
    if isinstance(ph, Phase) and ph.kind == "log_bar":
        _check_domain(ph, p, R_MIN)
        # x3 = r sin(theta) > 0 on the log_bar half space
        scheme = FDScheme(h=min(scheme.step(x), 0.5 * float(x[2])), relative=False)
    phase_cart = lambda y: phase(cart_cyl(y))
    amp_cart = lambda y: amplitude(cart_cyl(y))
    grad_phase = jacobian(phase_cart, x, scheme)
    lap_phase = complex(laplacian(phase_cart, x, scheme))
    jac_amp = jacobian(amp_cart, x, scheme)
    residual = 2.0 * (jac_amp @ grad_phase) + lap_phase * np.asarray(amplitude(p), dtype=complex)
    return float(np.max(np.abs(residual)))


__all__ = [
    "Phase",
    "PHASE_KINDS",
    "phase_eval",
    "phase_gradient",
    "check_eikonal",
    "check_lcw",
    "amplitude_A",
    "check_transport",
]
