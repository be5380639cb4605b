"""Accelerating electromagnetic beams in inhomogeneous media."""

__version__ = "1.0.0"
