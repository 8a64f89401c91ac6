"""Finite models for higher-dimensional composition: guillotine-tree coherence,
span composition, strict double categories and Dijkgraaf-Witten invariants."""

__version__ = "0.1.0"
