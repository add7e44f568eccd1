"""Symmetry-protected self-correction toolkit: models, barriers, dynamics."""

__version__ = "0.1.0"
