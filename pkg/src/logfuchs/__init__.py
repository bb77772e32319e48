"""Logarithmic connections on the projective line and their reduction to Fuchsian systems."""

__version__ = "0.1.0"
