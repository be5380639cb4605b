"""Data models: parameters, grids, media, reports, configuration and errors."""

from .config import RunConfig, PresetProfile
from .error_types import (
    BeamError,
    DomainError,
    FieldEvaluationError,
    ParameterError,
    SamplingError,
    ExportError,
    RenderError,
    VerificationError,
    ConfigError,
)
from .medium import MediumProfile, constant_medium, bump_medium
from .params import FDScheme, CylBeamParams, SphBeamParams, VirtualBeamParams, parse_grid
from .reports import CheckResult, SuiteReport, ScalingStudy

__all__ = [
    'RunConfig',
    'PresetProfile',
    'BeamError',
    'DomainError',
    'FieldEvaluationError',
    'ParameterError',
    'SamplingError',
    'ExportError',
    'RenderError',
    'VerificationError',
    'ConfigError',
    'MediumProfile',
    'constant_medium',
    'bump_medium',
    'FDScheme',
    'CylBeamParams',
    'SphBeamParams',
    'VirtualBeamParams',
    'parse_grid',
    'CheckResult',
    'SuiteReport',
    'ScalingStudy',
]
