"""Leading-order accelerating beam evaluators.

Only the explicit tau-proportional terms are evaluated; the O(1) remainders
of the CGO construction are not modeled.
"""

import warnings
from typing import Callable, NamedTuple, Tuple

import numpy as np

from src.lib.fieldcore import DEFAULT_SCHEME, R_MIN, CylPoint, cart_cyl, cyl_cart, cylindrical_frame
from src.lib.logging_config import get_logger
from src.models.error_types import BranchCutWarning, DomainError
from src.models.params import CylBeamParams, FDScheme, SphBeamParams

logger = get_logger(__name__)

EXP_LIMIT = 700.0
BRANCH_CUT_RATIO = 1e-3


class EHPair(NamedTuple):
    """Electric and magnetic complex amplitudes."""

    E: np.ndarray
    H: np.ndarray


def cyl_beam(params: CylBeamParams, p: CylPoint, r_min: float = R_MIN) -> EHPair:
    """Leading term of the cylindrical accelerating beam.

    E = tau gamma^(-1/2) e^((-tau + i lam)(x1 + i r)) / sqrt(2 i r) chi1(theta) (-i, cos, sin),
    H is the same with mu and chi2.

    Raises:
        DomainError: On axis, or when tau |x1| leaves floating-point range
        MediumError: If the medium is non-physical at p
    """
    if p.r <= r_min:
        raise DomainError("r > r_min", cyl_cart(p))
    if params.tau * abs(p.x1) > EXP_LIMIT:
        raise DomainError(f"tau*|x1| <= {EXP_LIMIT:g}", cyl_cart(p))
    mu, gamma = params.medium.params_at(cyl_cart(p))
    u = params.tau * np.exp((-params.tau + 1j * params.lam) * p.z) / np.sqrt(2j * p.r)
    direction = np.array([-1j, np.cos(p.theta), np.sin(p.theta)])
    e = u / np.sqrt(gamma) * params.profile1(p.theta) * direction
    h = u / np.sqrt(mu) * params.profile2(p.theta) * direction
    return EHPair(e, h)


def sph_beam(params: SphBeamParams, p: CylPoint, r_min: float = R_MIN) -> EHPair:
    """Leading term of the logarithmic-phase beam (not oscillating in r).

    E = tau gamma^(-1/2) e^(i lam (x1 - i r)) / ((x1 - i r)^(tau+1) sqrt(2 i r)) chi1(theta) (i, cos, sin)
    with the principal branch of (x1 - i r)^(tau+1).

    Raises:
        DomainError: Outside theta in (0, pi) or on axis

    Warns:
        BranchCutWarning: When x1 < 0 and r < 1e-3 |x1|
    """
    if not 0.0 < p.theta < np.pi:
        raise DomainError("theta in (0, pi)", cyl_cart(p))
    if p.r <= r_min:
        raise DomainError("r > r_min", cyl_cart(p))
    if p.x1 < 0 and p.r < BRANCH_CUT_RATIO * abs(p.x1):
        warnings.warn(
            f"point (x1={p.x1:.4g}, r={p.r:.3g}) is near the branch cut of log(x1 - i r)",
            BranchCutWarning,
            stacklevel=2,
        )
    mu, gamma = params.medium.params_at(cyl_cart(p))
    w = complex(p.x1, -p.r)
    u = params.tau * np.exp(1j * params.lam * w) / (np.exp((params.tau + 1) * np.log(w)) * np.sqrt(2j * p.r))
    direction = np.array([1j, np.cos(p.theta), np.sin(p.theta)])
    e = u / np.sqrt(gamma) * params.profile1(p.theta) * direction
    h = u / np.sqrt(mu) * params.profile2(p.theta) * direction
    return EHPair(e, h)


def hertz_tm(
    psi: Callable[[float, float], complex],
    p: CylPoint,
    scheme: FDScheme = DEFAULT_SCHEME,
    r_min: float = R_MIN,
) -> np.ndarray:
    """TM mode -r_hat d_theta psi / r + theta_hat d_r psi for psi(r, theta)."""
    if p.r <= r_min:
        raise DomainError("r > r_min", cyl_cart(p))
    h = scheme.step(cyl_cart(p))
    h_r = min(h, 0.5 * (p.r - r_min))
    h_t = h / p.r
    d_r = (complex(psi(p.r + h_r, p.theta)) - complex(psi(p.r - h_r, p.theta))) / (2 * h_r)
    d_t = (complex(psi(p.r, p.theta + h_t)) - complex(psi(p.r, p.theta - h_t))) / (2 * h_t)
    r_hat, theta_hat = cylindrical_frame(p.theta)
    return -r_hat * d_t / p.r + theta_hat * d_r


def _cartesian_fields(evaluate, params) -> Tuple[Callable, Callable]:
    return (
        lambda x: evaluate(params, cart_cyl(x)).E,
        lambda x: evaluate(params, cart_cyl(x)).H,
    )


def cyl_beam_fields(params: CylBeamParams) -> Tuple[Callable, Callable]:
    """(E, H) of the cylindrical beam as functions of a Cartesian point."""
    return _cartesian_fields(cyl_beam, params)


def sph_beam_fields(params: SphBeamParams) -> Tuple[Callable, Callable]:
    """(E, H) of the logarithmic-phase beam as functions of a Cartesian point."""
    return _cartesian_fields(sph_beam, params)


def e_component_power(params: CylBeamParams, p: CylPoint) -> Tuple[float, float, float]:
    """(|E2|^2, |E3|^2, |E2|^2 + |E3|^2); the sum is theta-invariant, the parts trade power."""
    e = cyl_beam(params, p).E
    e2, e3 = float(abs(e[1]) ** 2), float(abs(e[2]) ** 2)
    return e2, e3, e2 + e3


__all__ = [
    "EHPair",
    "cyl_beam",
    "sph_beam",
    "hertz_tm",
    "cyl_beam_fields",
    "sph_beam_fields",
    "e_component_power",
]
