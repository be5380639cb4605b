"""Field evaluation core: coordinates, phases, the Dirac system, beams and the Kelvin map."""

from .logging_config import setup_logging, get_logger
from .beams import cyl_beam, sph_beam
from .kelvin import KelvinMap, physical_beam
from .verify import maxwell_residual, scaling_study

__all__ = [
    # Beams
    'cyl_beam',
    'sph_beam',
    'KelvinMap',
    'physical_beam',
    # Verification
    'maxwell_residual',
    'scaling_study',
    # Logging utilities
    'setup_logging',
    'get_logger'
]
