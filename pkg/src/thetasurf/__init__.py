"""Theta surfaces of plane quartics: symbolic, tropical and numerical pipelines."""

__version__ = "0.1.0"
