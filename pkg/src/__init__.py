"""Acyclic orientations, source-firing posets and their distributive lattices."""

__version__ = "0.1.0"
