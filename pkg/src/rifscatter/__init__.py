"""Scattering of light at a moving refractive-index step in a dispersive dielectric."""

from .errors import *  # noqa: F401,F403
from .medium import FUSED_SILICA, MediumSpec, StepConfig, fused_silica, lorentz_to_lab

__version__ = "0.1.0"
