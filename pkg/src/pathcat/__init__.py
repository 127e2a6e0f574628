"""Finite path categories with groupoid-enriched homotopy structure."""

__version__ = "0.1.0"
