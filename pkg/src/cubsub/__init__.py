"""Cubical sets as 01-substitution sets, checked on finite instances."""

__version__ = "0.1.0"
