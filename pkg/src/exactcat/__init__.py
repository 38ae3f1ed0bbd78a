"""Exact categories, acyclic complexes and vector bundles on nodal rational curves."""

__version__ = "0.1.0"
