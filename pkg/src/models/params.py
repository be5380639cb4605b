"""Pydantic models for numerical schemes, beam parameters and sampling grids.

Beam parameter models carry callables (angular profiles) and a
``MediumProfile``, so they allow arbitrary types and are frozen after
validation.
"""

import math
from typing import Annotated, Any, Callable, Dict, Literal, Optional, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from src.models.medium import MediumProfile, constant_medium

Vec3 = Tuple[float, float, float]
Range = Tuple[float, float]


# ============================================================================
# Finite-difference scheme
# ============================================================================

class FDScheme(BaseModel):
    """Second-order central finite-difference scheme."""

    h: float = Field(default=1e-4, gt=0, description="Base step length")
    relative: bool = Field(
        default=True, description="Scale the step by max(1, |p|) at the evaluation point"
    )

    model_config = ConfigDict(frozen=True, json_schema_extra={"example": {"h": 1e-4, "relative": True}})

    def step(self, p) -> float:
        """Step length used at point p."""
        if not self.relative:
            return self.h
        return self.h * max(1.0, float(np.linalg.norm(np.asarray(p, dtype=float))))

    def fixed(self, p) -> "FDScheme":
        """Absolute scheme with the step this scheme uses at p (for nested stencils)."""
        return FDScheme(h=self.step(p), relative=False)


# ============================================================================
# Beam parameter models
# ============================================================================

def default_chi(rho: float) -> Callable[[float], complex]:
    """Angular profile chi(theta) = -exp(i rho theta)."""
    return lambda theta: -np.exp(1j * rho * theta)


def default_chi_derivative(rho: float) -> Callable[[float], complex]:
    return lambda theta: -1j * rho * np.exp(1j * rho * theta)


class CylBeamParams(BaseModel):
    """Parameters of the cylindrical accelerating beam.

    ``omega`` defaults to k / sqrt(mu0 eps0) when k > 0, otherwise to the
    medium's frequency. A constant medium is built when none is given.
    An omitted k is taken from the medium; a positive k must match
    omega * sqrt(mu0 eps0).
    """

    tau: float = Field(..., ge=1.0, description="Large CGO parameter")
    lam: float = Field(default=0.5, ge=0.0, alias="lambda", description="Amplitude frequency lambda")
    rho: float = Field(default=1.0, ge=0.0, description="Angular frequency of chi(theta)")
    k: float = Field(default=1.0, ge=0.0, description="Background wave number")
    omega: Optional[float] = Field(default=None, gt=0, description="Angular frequency")
    medium: Optional[MediumProfile] = Field(default=None, description="Medium profile")
    chi1: Optional[Callable[[float], complex]] = Field(default=None, description="Electric angular profile")
    chi2: Optional[Callable[[float], complex]] = Field(default=None, description="Magnetic angular profile")

    model_config = ConfigDict(
        frozen=True,
        populate_by_name=True,
        arbitrary_types_allowed=True,
        json_schema_extra={"example": {"tau": 10, "lambda": 0.5, "rho": 1.0, "k": 1.0}},
    )

    @model_validator(mode="before")
    @classmethod
    def resolve_medium(cls, data: Any) -> Any:
        if not isinstance(data, dict):
            return data
        data = dict(data)
        medium = data.get("medium")
        omega = data.get("omega")
        if medium is None:
            if omega is None:
                k = float(data.get("k", 1.0))
                omega = k if k > 0 else 1.0
            medium = data["medium"] = constant_medium(omega=float(omega))
        elif omega is None:
            omega = medium.omega
        # an absent k follows the medium; an explicit positive k must agree with it
        if "k" not in data:
            data["k"] = medium.k
        elif float(data["k"]) > 0 and not math.isclose(medium.k, float(data["k"]), rel_tol=1e-9):
            raise ValueError(
                f"k={data['k']} does not match omega*sqrt(mu0*eps0)={medium.k} (omega={float(omega)})"
            )
        data["omega"] = float(omega)
        return data

    @property
    def profile1(self) -> Callable[[float], complex]:
        return self.chi1 if self.chi1 is not None else default_chi(self.rho)

    @property
    def profile2(self) -> Callable[[float], complex]:
        return self.chi2 if self.chi2 is not None else default_chi(self.rho)

    def snapshot(self) -> Dict[str, Any]:
        """Plain-dict provenance record."""
        return {
            "beam": "cyl",
            "tau": self.tau,
            "lambda": self.lam,
            "rho": self.rho,
            "k": self.k,
            "omega": self.omega,
            "medium": self.medium.name,
            "custom_chi": self.chi1 is not None or self.chi2 is not None,
        }


class SphBeamParams(BaseModel):
    """Parameters of the spherical-phase (logarithmic weight) beam, k = 0."""

    tau: float = Field(..., ge=1.0, description="Large CGO parameter")
    lam: float = Field(default=0.5, ge=0.0, alias="lambda")
    rho: float = Field(default=1.0, ge=0.0)
    omega: float = Field(default=1.0, gt=0, description="Rendering frequency only")
    medium: Optional[MediumProfile] = None
    chi1: Optional[Callable[[float], complex]] = None
    chi2: Optional[Callable[[float], complex]] = None

    model_config = ConfigDict(
        frozen=True,
        populate_by_name=True,
        arbitrary_types_allowed=True,
        json_schema_extra={"example": {"tau": 9, "lambda": 0.5, "rho": 1.0}},
    )

    @model_validator(mode="before")
    @classmethod
    def default_medium(cls, data: Any) -> Any:
        if isinstance(data, dict) and data.get("medium") is None:
            data = dict(data)
            data["medium"] = constant_medium(omega=float(data.get("omega", 1.0)))
        return data

    @property
    def profile1(self) -> Callable[[float], complex]:
        return self.chi1 if self.chi1 is not None else default_chi(self.rho)

    @property
    def profile2(self) -> Callable[[float], complex]:
        return self.chi2 if self.chi2 is not None else default_chi(self.rho)

    def snapshot(self) -> Dict[str, Any]:
        return {
            "beam": "sph",
            "tau": self.tau,
            "lambda": self.lam,
            "rho": self.rho,
            "omega": self.omega,
            "medium": self.medium.name,
        }


class VirtualBeamParams(BaseModel):
    """Parameters of the virtual-space CGO beam behind the Kelvin construction."""

    tau: float = Field(..., gt=0, description="Large CGO parameter")
    rho: float = Field(default=0.0, ge=0.0, description="Propagation frequency along x3")
    a: Vec3 = Field(default=(-1 / math.sqrt(2), -1 / math.sqrt(2), 0.0), description="Electric polarization")
    b: Vec3 = Field(default=(-1 / math.sqrt(2), -1 / math.sqrt(2), 0.0), description="Magnetic polarization")
    mu0: float = Field(default=1.0, gt=0)
    eps0: float = Field(default=1.0, gt=0)
    sigma0: float = Field(default=0.0, ge=0)
    omega: float = Field(default=1.0, gt=0)

    model_config = ConfigDict(
        frozen=True,
        json_schema_extra={"example": {"tau": 4, "rho": 2.6457513110645907, "a": [-0.7071, -0.7071, 0]}},
    )

    @model_validator(mode="after")
    def rho_below_tau(self) -> "VirtualBeamParams":
        if self.rho >= self.tau:
            raise ValueError(f"rho={self.rho} must be < tau={self.tau}")
        return self

    @classmethod
    def from_transverse(cls, tau: float, transverse: float, **kwargs) -> "VirtualBeamParams":
        """Build from tau and sqrt(tau^2 - rho^2)."""
        if not 0 < transverse <= tau:
            raise ValueError(f"transverse frequency {transverse} must lie in (0, tau]")
        return cls(tau=tau, rho=math.sqrt(tau * tau - transverse * transverse), **kwargs)

    @property
    def transverse(self) -> float:
        return math.sqrt(self.tau * self.tau - self.rho * self.rho)

    @property
    def gamma0(self) -> complex:
        return complex(self.eps0, self.sigma0 / self.omega)

    def snapshot(self) -> Dict[str, Any]:
        return {"beam": "kelvin", **self.model_dump(mode="json")}


# ============================================================================
# Sampling grids
# ============================================================================

def _check_range(v: Range) -> Range:
    lo, hi = float(v[0]), float(v[1])
    if not (math.isfinite(lo) and math.isfinite(hi)) or hi <= lo:
        raise ValueError(f"range {v} must be finite with hi > lo")
    return (lo, hi)


class PlaneGrid(BaseModel):
    """Rectangle on the plane x[axis] = offset; u, v run over the other axes in order."""

    kind: Literal["plane"] = "plane"
    axis: int = Field(default=0, ge=0, le=2, description="Normal axis index")
    offset: float = 0.0
    u_range: Range = (-1.0, 1.0)
    v_range: Range = (-1.0, 1.0)
    n_u: int = Field(default=64, ge=2)
    n_v: int = Field(default=64, ge=2)

    model_config = ConfigDict(frozen=True)

    @field_validator("u_range", "v_range")
    @classmethod
    def non_degenerate(cls, v: Range) -> Range:
        return _check_range(v)

    def mesh(self) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Return (u, v, points) with points of shape (n_u, n_v, 3)."""
        u = np.linspace(*self.u_range, self.n_u)
        v = np.linspace(*self.v_range, self.n_v)
        uu, vv = np.meshgrid(u, v, indexing="ij")
        tangential = [i for i in range(3) if i != self.axis]
        pts = np.zeros((self.n_u, self.n_v, 3))
        pts[..., self.axis] = self.offset
        pts[..., tangential[0]] = uu
        pts[..., tangential[1]] = vv
        return u, v, pts


class SphereGrid(BaseModel):
    """Spherical cap parameterized by polar angle (u) and azimuth (v) about ``axis``."""

    kind: Literal["sphere"] = "sphere"
    center: Vec3 = (0.0, 0.0, 0.0)
    radius: float = Field(default=1.0, gt=0)
    axis: Vec3 = (0.0, 0.0, 1.0)
    polar_range: Range = (0.0, math.pi)
    azimuth_range: Range = (0.0, 2 * math.pi)
    n_u: int = Field(default=64, ge=2)
    n_v: int = Field(default=64, ge=2)

    model_config = ConfigDict(frozen=True)

    @field_validator("polar_range", "azimuth_range")
    @classmethod
    def non_degenerate(cls, v: Range) -> Range:
        return _check_range(v)

    @field_validator("axis")
    @classmethod
    def nonzero_axis(cls, v: Vec3) -> Vec3:
        if float(np.linalg.norm(v)) == 0.0:
            raise ValueError("axis must be a non-zero vector")
        return v

    def frame(self) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Orthonormal (e1, e2, n) with n along the cap axis."""
        n = np.asarray(self.axis, dtype=float)
        n = n / np.linalg.norm(n)
        helper = np.array([0.0, 0.0, 1.0]) if abs(n[2]) < 0.9 else np.array([1.0, 0.0, 0.0])
        e1 = helper - (helper @ n) * n
        e1 = e1 / np.linalg.norm(e1)
        e2 = np.cross(n, e1)
        return e1, e2, n

    def mesh(self) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        polar = np.linspace(*self.polar_range, self.n_u)
        azimuth = np.linspace(*self.azimuth_range, self.n_v)
        e1, e2, n = self.frame()
        th, ph = np.meshgrid(polar, azimuth, indexing="ij")
        direction = (
            np.sin(th)[..., None] * np.cos(ph)[..., None] * e1
            + np.sin(th)[..., None] * np.sin(ph)[..., None] * e2
            + np.cos(th)[..., None] * n
        )
        pts = np.asarray(self.center, dtype=float) + self.radius * direction
        return polar, azimuth, pts


class AnnulusGrid(BaseModel):
    """Polar slice of the plane x1 = const: rows are radii (u), columns angles (v)."""

    kind: Literal["annulus"] = "annulus"
    x1: float = 0.0
    r_range: Range = (0.5, 3.0)
    theta_range: Range = (-math.pi, math.pi)
    n_u: int = Field(default=64, ge=2)
    n_v: int = Field(default=128, ge=2)

    model_config = ConfigDict(frozen=True)

    @field_validator("r_range", "theta_range")
    @classmethod
    def non_degenerate(cls, v: Range) -> Range:
        return _check_range(v)

    @field_validator("r_range")
    @classmethod
    def positive_radii(cls, v: Range) -> Range:
        if v[0] < 0:
            raise ValueError("radii must be >= 0")
        return v

    def mesh(self) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        r = np.linspace(*self.r_range, self.n_u)
        theta = np.linspace(*self.theta_range, self.n_v)
        rr, tt = np.meshgrid(r, theta, indexing="ij")
        pts = np.stack([np.full_like(rr, self.x1), rr * np.cos(tt), rr * np.sin(tt)], axis=-1)
        return r, theta, pts


class CircleGrid(BaseModel):
    """Single circle {x1, r} sampled in theta; a raster with one row."""

    kind: Literal["circle"] = "circle"
    x1: float = 0.0
    r: float = Field(default=1.0, gt=0)
    theta_range: Range = (-math.pi, math.pi)
    n_theta: int = Field(default=360, ge=2)

    model_config = ConfigDict(frozen=True)

    @field_validator("theta_range")
    @classmethod
    def non_degenerate(cls, v: Range) -> Range:
        return _check_range(v)

    def mesh(self) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        theta = np.linspace(*self.theta_range, self.n_theta)
        pts = np.stack(
            [np.full_like(theta, self.x1), self.r * np.cos(theta), self.r * np.sin(theta)], axis=-1
        )
        return np.array([self.r]), theta, pts[None, :, :]


GridSpec = Annotated[
    Union[PlaneGrid, SphereGrid, AnnulusGrid, CircleGrid], Field(discriminator="kind")
]


class GridHolder(BaseModel):
    """Wrapper used to validate a raw mapping into a GridSpec."""

    grid: GridSpec


def parse_grid(data: Dict[str, Any]) -> Union[PlaneGrid, SphereGrid, AnnulusGrid, CircleGrid]:
    """Validate a mapping (e.g. from YAML) into the matching grid model."""
    return GridHolder(grid=data).grid


__all__ = [
    "FDScheme",
    "CylBeamParams",
    "SphBeamParams",
    "VirtualBeamParams",
    "PlaneGrid",
    "SphereGrid",
    "AnnulusGrid",
    "CircleGrid",
    "GridSpec",
    "parse_grid",
    "default_chi",
    "default_chi_derivative",
]
