"""Exact models and dimension bounds for families of subgroups of
polycyclic-by-finite groups."""

__version__ = "0.1.0"
