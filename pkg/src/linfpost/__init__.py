"""Postnikov towers for finite-type L-infinity algebras and finite Kan complexes."""

__version__ = "0.1.0"
