"""Sampling, export, rendering, check suites and figure presets."""

from .sampling import sample_grid, export_csv, read_csv
from .render import render_pixmap
from .suites import run_suite
from .figures import run_figures

__all__ = [
    'sample_grid',
    'export_csv',
    'read_csv',
    'render_pixmap',
    'run_suite',
    'run_figures'
]
