"""Electromagnetic medium profiles (permeability and complex permittivity)."""

from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from src.models.error_types import MediumError, ParameterError

ScalarField = Callable[[np.ndarray], complex]


def bump(t: float) -> float:
    """C-infinity radial bump exp(1 - 1/(1 - t^2)), equal to 1 at t = 0 and 0 for |t| >= 1."""
    if abs(t) >= 1.0:
        return 0.0
    return float(np.exp(1.0 - 1.0 / (1.0 - t * t)))


@dataclass(frozen=True)
class MediumProfile:
    """Isotropic medium described by mu(x) and gamma(x) = eps(x) + i sigma(x)/omega.

    Attributes:
        mu: Permeability as a function of a Cartesian point
        gamma: Complex permittivity as a function of a Cartesian point
        mu0: Background permeability
        eps0: Background permittivity
        sigma0: Background conductivity
        omega: Angular frequency
        support_radius: Radius outside which mu, gamma equal the background
        name: Label used in logs and provenance
    """

    mu: ScalarField
    gamma: ScalarField
    mu0: float = 1.0
    eps0: float = 1.0
    sigma0: float = 0.0
    omega: float = 1.0
    support_radius: Optional[float] = None
    name: str = field(default="custom")

    @property
    def k(self) -> float:
        """Background wave number omega * sqrt(mu0 * eps0)."""
        return self.omega * float(np.sqrt(self.mu0 * self.eps0))

    @property
    def gamma0(self) -> complex:
        return complex(self.eps0, self.sigma0 / self.omega)

    def params_at(self, p: Sequence[float]) -> tuple:
        """Evaluate (mu, gamma) at p, rejecting non-physical values.

        Raises:
            MediumError: If Re mu <= 0, Re gamma <= 0 or a value is not finite
        """
        x = np.asarray(p, dtype=float)
        mu = complex(self.mu(x))
        gamma = complex(self.gamma(x))
        if not (np.isfinite(mu) and np.isfinite(gamma)):
            raise MediumError(x, "non-finite mu or gamma")
        if mu.real <= 0:
            raise MediumError(x, f"Re mu = {mu.real:.3g} <= 0")
        if gamma.real <= 0:
            raise MediumError(x, f"Re gamma = {gamma.real:.3g} <= 0")
        return mu, gamma

    def kappa(self, p: Sequence[float]) -> complex:
        """Local wave number omega * mu^(1/2) * gamma^(1/2) (principal roots)."""
        mu, gamma = self.params_at(p)
        return self.omega * np.sqrt(mu) * np.sqrt(gamma)


def constant_medium(
    mu0: float = 1.0,
    eps0: float = 1.0,
    sigma0: float = 0.0,
    omega: float = 1.0,
) -> MediumProfile:
    """Homogeneous background medium, lossy when sigma0 > 0."""
    if omega <= 0:
        raise ParameterError("omega", omega, "must be > 0")
    if mu0 <= 0 or eps0 <= 0:
        raise ParameterError("mu0/eps0", (mu0, eps0), "must be > 0")
    gamma0 = complex(eps0, sigma0 / omega)
    return MediumProfile(
        mu=lambda x: complex(mu0),
        gamma=lambda x: gamma0,
        mu0=mu0,
        eps0=eps0,
        sigma0=sigma0,
        omega=omega,
        support_radius=0.0,
        name="lossy" if sigma0 > 0 else "constant",
    )


def bump_medium(
    mu_amplitude: float = 0.1,
    gamma_amplitude: float = 0.3,
    support_radius: float = 1.0,
    center: Sequence[float] = (0.0, 0.0, 0.0),
    mu0: float = 1.0,
    eps0: float = 1.0,
    sigma0: float = 0.0,
    omega: float = 1.0,
) -> MediumProfile:
    """Background medium with compactly supported radial bumps in mu and gamma.

    mu = mu0 (1 + mu_amplitude b(|x - c| / R)), gamma = gamma0 (1 + gamma_amplitude b(...)).
    """
    if support_radius <= 0:
        raise ParameterError("support_radius", support_radius, "must be > 0")
    if mu_amplitude <= -1 or gamma_amplitude <= -1:
        raise ParameterError("amplitude", (mu_amplitude, gamma_amplitude), "must be > -1")
    c = np.asarray(center, dtype=float)
    gamma0 = complex(eps0, sigma0 / omega)

    def _profile(x: np.ndarray) -> float:
        return bump(float(np.linalg.norm(np.asarray(x, dtype=float) - c)) / support_radius)

    return MediumProfile(
        mu=lambda x: mu0 * (1.0 + mu_amplitude * _profile(x)),
        gamma=lambda x: gamma0 * (1.0 + gamma_amplitude * _profile(x)),
        mu0=mu0,
        eps0=eps0,
        sigma0=sigma0,
        omega=omega,
        support_radius=support_radius,
        name="bump",
    )


__all__ = ["MediumProfile", "bump", "constant_medium", "bump_medium", "ScalarField"]
