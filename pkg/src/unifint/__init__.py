"""Congruence lattices, free algebras and uniform interpolation for finite algebras."""

__version__ = "0.1.0"
