"""Kelvin transform, push-forward of fields and parameters, and the Kelvin beam.

The virtual-space beam lives on the annulus R^2/L < |x~| < L, where the
cutoff equals one. It is pulled back to physical space through the sphere
inversion K(x) = R^2 x / |x|^2.
"""

import math
import warnings
from dataclasses import dataclass
from typing import Callable, List, Sequence, Tuple

import numpy as np

from src.lib.beams import EHPair
from src.lib.dirac import p_symbol
from src.lib.fieldcore import R_MIN, as_point, assemble8, bilinear_dot
from src.lib.logging_config import get_logger
from src.models.error_types import DomainError, OutsideAnnulusWarning, ParameterError, SingularJacobianError
from src.models.params import VirtualBeamParams

logger = get_logger(__name__)

DEFAULT_ANNULUS_FACTOR = 4.5
ZETA_HAT = 0.5 * np.array([-1 + 1j, 1 + 1j, 0j])

VectorField = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class KelvinMap:
    """Sphere inversion of radius R; the annulus outer radius is L = annulus_factor * R."""

    R: float
    annulus_factor: float = DEFAULT_ANNULUS_FACTOR
    r_min: float = R_MIN

    def __post_init__(self):
        if not self.R > 0:
            raise ParameterError("R", self.R, "must be > 0")
        if not self.annulus_factor > 4:
            raise ParameterError("annulus_factor", self.annulus_factor, "must be > 4")

    @property
    def outer_radius(self) -> float:
        return self.annulus_factor * self.R

    @property
    def inner_radius(self) -> float:
        return self.R * self.R / self.outer_radius

    def _norm(self, x: np.ndarray) -> float:
        n = float(np.linalg.norm(x))
        if n <= self.r_min:
            raise DomainError("|x| > r_min", x)
        return n

    def apply(self, x: Sequence[float]) -> np.ndarray:
        x = as_point(x)
        n = self._norm(x)
        return (self.R * self.R / (n * n)) * x

    def inverse(self, x_tilde: Sequence[float]) -> np.ndarray:
        return self.apply(x_tilde)

    def jacobian(self, x: Sequence[float]) -> np.ndarray:
        x = as_point(x)
        n = self._norm(x)
        r_hat = x / n
        return (self.R * self.R / (n * n)) * (np.eye(3) - 2.0 * np.outer(r_hat, r_hat))


class IdentityMap:
    """Trivial diffeomorphism with the KelvinMap interface."""

    def apply(self, x: Sequence[float]) -> np.ndarray:
        return as_point(x)

    def inverse(self, x_tilde: Sequence[float]) -> np.ndarray:
        return as_point(x_tilde)

    def jacobian(self, x: Sequence[float]) -> np.ndarray:
        return np.eye(3)


def kelvin_map(km: KelvinMap, x: Sequence[float]) -> np.ndarray:
    """K(x) = R^2 x / |x|^2.

    Raises:
        DomainError: If |x| <= r_min
    """
    return km.apply(x)


def kelvin_jacobian(km: KelvinMap, x: Sequence[float]) -> np.ndarray:
    """DK(x) = (R^2/|x|^2)(I - 2 r_hat r_hat^t); |det DK| = R^6/|x|^6."""
    return km.jacobian(x)


def in_annulus(km: KelvinMap, x_tilde: Sequence[float]) -> bool:
    n = float(np.linalg.norm(np.asarray(x_tilde, dtype=float)))
    return km.inner_radius < n < km.outer_radius


def pushforward_field(F, field: VectorField, x_tilde: Sequence[float], pseudo: bool = False) -> np.ndarray:
    """Push-forward DF(x)^(-t) field(x) at x = F^(-1)(x~).

    For Kelvin, DF(x)^(-t) equals DK(x~). With ``pseudo`` the result is also
    multiplied by the orientation sign of F, which is how the magnetic field
    transforms when material parameters use |det DF|.

    Raises:
        SingularJacobianError: If DF is singular at x
    """
    x = F.inverse(x_tilde)
    jac = F.jacobian(x)
    det = float(np.linalg.det(jac))
    if not np.isfinite(det) or abs(det) < 1e-300:
        raise SingularJacobianError(x, det)
    value = np.linalg.solve(jac.T, np.asarray(field(x), dtype=complex))
    return np.sign(det) * value if pseudo else value


def pushforward_params(
    km: KelvinMap,
    x_tilde: Sequence[float],
    mu0: float = 1.0,
    eps0: float = 1.0,
    sigma0: float = 0.0,
    omega: float = 1.0,
) -> Tuple[complex, complex]:
    """Isotropic push-forward (R^2/|x~|^2)(mu0, gamma0) with gamma0 = eps0 + i sigma0/omega."""
    x_tilde = as_point(x_tilde)
    n = float(np.linalg.norm(x_tilde))
    if n <= km.r_min:
        raise DomainError("|x| > r_min", x_tilde)
    factor = km.R * km.R / (n * n)
    return complex(factor * mu0), factor * complex(eps0, sigma0 / omega)


def pushforward_tensor(km: KelvinMap, x: Sequence[float], value: complex = 1.0) -> np.ndarray:
    """Full push-forward DK m DK^t / |det DK| of an isotropic parameter m at x."""
    jac = km.jacobian(x)
    return value * (jac @ jac.T) / abs(float(np.linalg.det(jac)))


# ============================================================================
# Virtual-space beam
# ============================================================================

def zeta_for(tau: float, rho: float) -> np.ndarray:
    """zeta = ((-tau, tau, 0) + i (s, s, sqrt(2) rho)) / 2 with s = sqrt(tau^2 - rho^2).

    Raises:
        ParameterError: Unless 0 <= rho < tau
    """
    if not 0 <= rho < tau:
        raise ParameterError("rho", rho, f"must satisfy 0 <= rho < tau={tau}")
    s = math.sqrt(tau * tau - rho * rho)
    return 0.5 * (np.array([-tau, tau, 0.0]) + 1j * np.array([s, s, math.sqrt(2) * rho]))


def virtual_amplitudes(vp: VirtualBeamParams) -> Tuple[np.ndarray, np.ndarray]:
    """A = (zeta.a, 0, zeta.b, 0)/tau and B = P(-i zeta) A."""
    zeta = zeta_for(vp.tau, vp.rho)
    a = np.asarray(vp.a, dtype=float)
    b = np.asarray(vp.b, dtype=float)
    amp_a = assemble8(bilinear_dot(zeta, a) / vp.tau, np.zeros(3), bilinear_dot(zeta, b) / vp.tau, np.zeros(3))
    return amp_a, p_symbol(-1j * zeta) @ amp_a


def leading_amplitude(vp: VirtualBeamParams) -> np.ndarray:
    """Leading part -i tau (0, (z.b) z, 0, (z.a) z) of B, z the limit of zeta/tau."""
    za = bilinear_dot(ZETA_HAT, np.asarray(vp.a, dtype=float))
    zb = bilinear_dot(ZETA_HAT, np.asarray(vp.b, dtype=float))
    return -1j * vp.tau * assemble8(0.0, zb * ZETA_HAT, 0.0, za * ZETA_HAT)


def virtual_beam(vp: VirtualBeamParams, x_tilde: Sequence[float], km: KelvinMap = None) -> Tuple[np.ndarray, np.ndarray]:
    """Leading virtual fields e~ = phase (z.a) z, h~ = phase (z.b) z.

    phase = exp((-tau (x1 - x2) + i s (x1 + x2)) / 2) exp(i rho x3).

    Warns:
        OutsideAnnulusWarning: When km is given and x~ is outside its annulus
    """
    xt = as_point(x_tilde)
    if km is not None and not in_annulus(km, xt):
        warnings.warn(
            f"|x~|={np.linalg.norm(xt):.4g} outside annulus ({km.inner_radius:.4g}, {km.outer_radius:.4g})",
            OutsideAnnulusWarning,
            stacklevel=2,
        )
    phase = np.exp(0.5 * (-vp.tau * (xt[0] - xt[1]) + 1j * vp.transverse * (xt[0] + xt[1]))) * np.exp(
        1j * vp.rho * xt[2]
    )
    za = bilinear_dot(ZETA_HAT, np.asarray(vp.a, dtype=float))
    zb = bilinear_dot(ZETA_HAT, np.asarray(vp.b, dtype=float))
    return phase * za * ZETA_HAT, phase * zb * ZETA_HAT


def physical_beam(vp: VirtualBeamParams, km: KelvinMap, x: Sequence[float]) -> EHPair:
    """Free-space accelerating beam E = -i tau gamma0^(-1/2) (R^3/|x|^3)(I - 2 r_hat r_hat^t) e~(K(x)).

    H uses mu0 and h~. gamma0 = eps0 + i sigma0/omega (the lossless case is gamma0 = eps0).
    """
    x = as_point(x)
    x_tilde = km.apply(x)
    e_t, h_t = virtual_beam(vp, x_tilde, km)
    n = float(np.linalg.norm(x))
    r_hat = x / n
    reflect = np.eye(3) - 2.0 * np.outer(r_hat, r_hat)
    scale = -1j * vp.tau * (km.R / n) ** 3
    e = scale / np.sqrt(vp.gamma0) * (reflect @ e_t)
    h = scale / np.sqrt(vp.mu0) * (reflect @ h_t)
    return EHPair(e, h)


def physical_beam_fields(vp: VirtualBeamParams, km: KelvinMap) -> Tuple[VectorField, VectorField]:
    return (lambda x: physical_beam(vp, km, x).E, lambda x: physical_beam(vp, km, x).H)


def kelvin_profile(vp: VirtualBeamParams, km: KelvinMap, x: Sequence[float]) -> np.ndarray:
    """(R^3/|x|^3) e~(K(x)), the rendered physical-space quantity."""
    x = as_point(x)
    n = float(np.linalg.norm(x))
    e_t, _ = virtual_beam(vp, km.apply(x), km)
    return (km.R / n) ** 3 * e_t


def kelvin_trajectory(
    km: KelvinMap,
    start: Sequence[float],
    direction: Sequence[float],
    ts: Sequence[float],
) -> List[np.ndarray]:
    """Images under K of the virtual line start + t direction."""
    x0 = as_point(start)
    d = as_point(direction)
    return [km.apply(x0 + t * d) for t in ts]


# ============================================================================
# Exact plane waves (transformation-law checks)
# ============================================================================

def plane_wave_fields(
    direction: Sequence[float] = (0.0, 0.0, 1.0),
    polarization: Sequence[float] = (1.0, 0.0, 0.0),
    mu0: float = 1.0,
    eps0: float = 1.0,
    omega: float = 1.0,
) -> Tuple[VectorField, VectorField]:
    """Exact time-harmonic plane wave in a constant lossless medium.

    E = p e^(i k n.x), H = (k / (omega mu0)) n x p e^(i k n.x), k = omega sqrt(mu0 eps0).
    """
    n = as_point(direction)
    n = n / np.linalg.norm(n)
    pol = as_point(polarization)
    pol = pol - (pol @ n) * n
    if np.linalg.norm(pol) < 1e-12:
        raise ParameterError("polarization", tuple(polarization), "must not be parallel to the direction")
    pol = pol / np.linalg.norm(pol)
    k = omega * math.sqrt(mu0 * eps0)
    h_dir = (k / (omega * mu0)) * np.cross(n, pol)
    return (
        lambda x: pol * np.exp(1j * k * (n @ np.asarray(x))),
        lambda x: h_dir * np.exp(1j * k * (n @ np.asarray(x))),
    )


def pushed_plane_wave(
    km: KelvinMap,
    direction: Sequence[float] = (0.0, 0.0, 1.0),
    polarization: Sequence[float] = (1.0, 0.0, 0.0),
    mu0: float = 1.0,
    eps0: float = 1.0,
    omega: float = 1.0,
) -> Tuple[VectorField, VectorField, Callable, Callable]:
    """(E~, H~, mu~, eps~) of a plane wave pushed forward by K."""
    e, h = plane_wave_fields(direction, polarization, mu0, eps0, omega)
    return (
        lambda xt: pushforward_field(km, e, xt),
        lambda xt: pushforward_field(km, h, xt, pseudo=True),
        lambda xt: pushforward_params(km, xt, mu0, eps0, 0.0, omega)[0],
        lambda xt: pushforward_params(km, xt, mu0, eps0, 0.0, omega)[1],
    )


__all__ = [
    "KelvinMap",
    "IdentityMap",
    "ZETA_HAT",
    "kelvin_map",
    "kelvin_jacobian",
    "in_annulus",
    "pushforward_field",
    "pushforward_params",
    "pushforward_tensor",
    "zeta_for",
    "virtual_amplitudes",
    "leading_amplitude",
    "virtual_beam",
    "physical_beam",
    "physical_beam_fields",
    "kelvin_profile",
    "kelvin_trajectory",
    "plane_wave_fields",
    "pushed_plane_wave",
]
