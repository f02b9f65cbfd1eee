"""Spectral Mittag-Leffler calculus for semilinear fractional diffusion-wave equations."""

__version__ = "0.1.0"
