"""Finite Kripke frames: chequered and Medvedev frames, validity, p-morphisms."""

__version__ = "0.1.0"
