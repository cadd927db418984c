"""Desk-scale numerical laboratory for critical-line zeta statistics."""

__version__ = "0.1.0"
