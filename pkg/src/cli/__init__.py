"""Command-line interface for the beam toolkit."""

from .beams_cli import main

__all__ = ['main']
