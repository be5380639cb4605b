"""Run configuration loader with preset support."""

import math
import os
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional, Union

import yaml
from dotenv import load_dotenv
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

from src.models.error_types import ConfigError
from src.models.params import SphereGrid, parse_grid

BUILTIN_DEFAULTS: Dict[str, Any] = {
    "seed": 0,
    "fd_step": 1e-4,
    "r_min": 1e-6,
    "workers": 1,
    "annulus_factor": 4.5,
}
BUILTIN_BACKGROUND: Dict[str, float] = {"mu0": 1.0, "eps0": 1.0, "sigma0": 0.0, "omega": 1.0}

ENV_KEYS = {
    "seed": ("BEAMS_SEED", int),
    "fd_step": ("BEAMS_FD_STEP", float),
    "workers": ("BEAMS_WORKERS", int),
}


class RenderOptions(BaseModel):
    """How a preset's raster is rendered."""

    quantity: Literal["re", "im", "abs", "abs2"] = "abs"
    component: Union[int, Literal["norm"]] = 0
    normalization: Literal["linear", "log"] = "linear"
    colormap: Optional[str] = None

    model_config = ConfigDict(frozen=True)


class PresetProfile(BaseModel):
    """One named preset: beam kind, its parameters, a grid and render options."""

    name: str
    description: str = ""
    beam: Literal["cyl", "sph", "kelvin"]
    field: Literal["E", "H", "profile"] = "E"
    params: Dict[str, Any] = Field(default_factory=dict)
    grid: Optional[Dict[str, Any]] = Field(None, description="GridSpec mapping")
    sphere_a: Optional[float] = Field(None, gt=0, description="a of the sphere (x1-a)^2+(x2-a)^2+x3^2 = 2a^2")
    sphere_polar_max: float = Field(default=math.pi / 3, gt=0, le=math.pi)
    resolution: int = Field(default=128, ge=2)
    strip_carrier: bool = Field(
        default=False, description="Divide out the angular carrier e^(i rho theta) to show the transverse profile"
    )
    render: RenderOptions = Field(default_factory=RenderOptions)
    assumed: List[str] = Field(default_factory=list)

    model_config = ConfigDict(
        json_schema_extra={
            "example": {
                "name": "fig1",
                "beam": "cyl",
                "params": {"tau": 10, "lambda": 0.5},
                "grid": {"kind": "annulus", "x1": 0.0, "r_range": [1.0, 3.0]},
            }
        }
    )

    @field_validator("grid")
    @classmethod
    def grid_is_valid(cls, v: Optional[Dict[str, Any]]) -> Optional[Dict[str, Any]]:
        if v is not None:
            parse_grid(v)
        return v

    def grid_spec(self):
        """The sampling grid: the explicit grid, or the spherical cap around the sphere's far point."""
        if self.grid is not None:
            return parse_grid(self.grid)
        if self.sphere_a is None:
            raise ConfigError(f"Preset '{self.name}' defines neither 'grid' nor 'sphere_a'")
        a = self.sphere_a
        return SphereGrid(
            center=(a, a, 0.0),
            radius=math.sqrt(2.0) * a,
            axis=(1.0, 1.0, 0.0),
            polar_range=(0.0, self.sphere_polar_max),
            azimuth_range=(0.0, 2 * math.pi),
            n_u=self.resolution,
            n_v=self.resolution,
        )


class RunConfig:
    """Resolved run configuration.

    Priority order: explicit overrides > environment variables > YAML preset >
    YAML defaults > built-in defaults.
    """

    def __init__(
        self,
        preset_name: Optional[str] = None,
        config_path: Optional[Union[str, Path]] = None,
        overrides: Optional[Dict[str, Any]] = None,
    ):
        load_dotenv()

        self.overrides: Dict[str, Any] = {k: v for k, v in (overrides or {}).items() if v is not None}
        self.values: Dict[str, Any] = dict(BUILTIN_DEFAULTS)
        self.background: Dict[str, float] = dict(BUILTIN_BACKGROUND)
        self.sources: Dict[str, str] = {key: "builtin" for key in BUILTIN_DEFAULTS}
        self.presets: Dict[str, PresetProfile] = {}
        self.default_preset: Optional[str] = None
        self.config_path: Optional[Path] = None
        self.preset: Optional[PresetProfile] = None

        self._load_configuration(preset_name, config_path)
        self.validate()

    def _load_configuration(self, preset_name: Optional[str], config_path: Optional[Union[str, Path]]):
        # Priority 4: YAML defaults and background
        data = self._load_yaml(config_path or self.overrides.get("config") or os.getenv("BEAMS_CONFIG"))
        for key, value in (data.get("defaults") or {}).items():
            if key in BUILTIN_DEFAULTS:
                self.values[key] = value
                self.sources[key] = "yaml"
        self.background.update(data.get("background") or {})
        for name, raw in (data.get("presets") or {}).items():
            try:
                self.presets[name] = PresetProfile(name=name, **raw)
            except ValidationError as e:
                raise ConfigError(f"Invalid preset '{name}': {e}")
        self.default_preset = data.get("default_preset")

        # Priority 3: selected preset
        name = preset_name or self.overrides.get("preset") or os.getenv("BEAMS_PRESET") or self.default_preset
        if name is not None:
            self.preset = self.get_preset(name)

        # Priority 2: environment variables
        for key, (env_name, cast) in ENV_KEYS.items():
            raw_value = os.getenv(env_name)
            if raw_value is None:
                continue
            try:
                self.values[key] = cast(raw_value)
            except ValueError:
                raise ConfigError(f"Invalid {env_name} value: {raw_value}")
            self.sources[key] = "env"

        # Priority 1: explicit overrides
        for key in BUILTIN_DEFAULTS:
            if key in self.overrides:
                self.values[key] = self.overrides[key]
                self.sources[key] = "override"

    def _load_yaml(self, config_path: Optional[Union[str, Path]]) -> Dict[str, Any]:
        """Load the presets file; an explicit path must exist, default locations may not."""
        if config_path is not None:
            candidates = [Path(config_path)]
        else:
            candidates = [
                Path("config/presets.yaml"),
                Path(__file__).parent.parent.parent / "config" / "presets.yaml",
            ]
        for path in candidates:
            try:
                with open(path, "r", encoding="utf-8") as f:
                    data = yaml.safe_load(f) or {}
            except FileNotFoundError:
                continue
            except yaml.YAMLError as e:
                raise ConfigError(f"Cannot parse config file '{path}': {e}")
            if not isinstance(data, dict):
                raise ConfigError(f"Config file '{path}' must contain a mapping")
            self.config_path = path
            return data
        if config_path is not None:
            raise ConfigError(f"Config file '{config_path}' not found")
        return {}

    @property
    def seed(self) -> int:
        return int(self.values["seed"])

    @property
    def fd_step(self) -> float:
        return float(self.values["fd_step"])

    @property
    def r_min(self) -> float:
        return float(self.values["r_min"])

    @property
    def workers(self) -> int:
        return int(self.values["workers"])

    @property
    def annulus_factor(self) -> float:
        return float(self.values["annulus_factor"])

    def get_preset(self, name: str) -> PresetProfile:
        """Look up a preset by name.

        Raises:
            ConfigError: If the preset does not exist
        """
        if name not in self.presets:
            available = ", ".join(sorted(self.presets)) or "<none>"
            raise ConfigError(f"Preset '{name}' not found (available: {available})")
        return self.presets[name]

    def list_presets(self) -> Dict[str, Dict[str, Any]]:
        return {
            name: {
                "description": p.description,
                "beam": p.beam,
                "current": self.preset is not None and p.name == self.preset.name,
            }
            for name, p in self.presets.items()
        }

    def validate(self):
        """Validate resolved values.

        Raises:
            ConfigError: On a non-positive step, radius or worker count, or a bad background
        """
        if not isinstance(self.values["seed"], int) or self.values["seed"] < 0:
            raise ConfigError(f"seed must be a non-negative integer, got {self.values['seed']!r}")
        if not float(self.values["fd_step"]) > 0:
            raise ConfigError(f"fd_step must be > 0, got {self.values['fd_step']}")
        if not float(self.values["r_min"]) > 0:
            raise ConfigError(f"r_min must be > 0, got {self.values['r_min']}")
        if int(self.values["workers"]) < 1:
            raise ConfigError(f"workers must be >= 1, got {self.values['workers']}")
        if not float(self.values["annulus_factor"]) > 4:
            raise ConfigError(f"annulus_factor must be > 4, got {self.values['annulus_factor']}")
        for key in ("mu0", "eps0", "omega"):
            if not float(self.background.get(key, 0.0)) > 0:
                raise ConfigError(f"background {key} must be > 0")
        if float(self.background.get("sigma0", 0.0)) < 0:
            raise ConfigError("background sigma0 must be >= 0")

    def snapshot(self) -> Dict[str, Any]:
        """Resolved configuration as a plain dict (printed and embedded in artifacts)."""
        return {
            "config_path": str(self.config_path) if self.config_path else None,
            "preset": self.preset.name if self.preset else None,
            **{key: self.values[key] for key in BUILTIN_DEFAULTS},
            "background": dict(self.background),
            "sources": dict(self.sources),
        }


__all__ = ["RunConfig", "PresetProfile", "RenderOptions", "BUILTIN_DEFAULTS", "BUILTIN_BACKGROUND"]
