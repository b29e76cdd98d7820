"""Electromagnetic scattering from an open rectangular cavity in a PEC ground plane.

The package reduces the Maxwell cavity problem to a small dense system on the
aperture: Fourier modes in the horizontal directions, per-mode tridiagonal
elimination in depth, and a nonlocal boundary condition whose singular
integrals are evaluated spectrally.  Backscatter RCS is computed from the
solved aperture field.
"""

from .config import CavityConfig, IncidentWave, ConfigError, parse_config, build_incident_wave
from .modes import ModeIndexSets, ApertureField, index_sets
from .pipeline import CavitySolver

__all__ = [
    "CavityConfig",
    "IncidentWave",
    "ConfigError",
    "parse_config",
    "build_incident_wave",
    "ModeIndexSets",
    "ApertureField",
    "index_sets",
    "CavitySolver",
]
