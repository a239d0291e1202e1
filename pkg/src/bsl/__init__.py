"""Orbit combinatorics, semilinear counting and L-function slopes for Tate-Shafarevich dimensions."""

__version__ = "0.1.0"
