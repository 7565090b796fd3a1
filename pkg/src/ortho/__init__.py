"""Counting common perpendiculars in hyperbolic space: geometry, constants and
arithmetic counting experiments."""

from . import constants, cusps, geom, hermitian, orbits, qforms, quat, report

__all__ = ["constants", "cusps", "geom", "hermitian", "orbits", "qforms", "quat", "report"]
__version__ = "0.1.0"
