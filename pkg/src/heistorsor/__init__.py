"""Heisenberg torsors over hyperelliptic curves and their quadratic specializations."""

__version__ = "0.1.0"
