"""Crossing probabilities for critical percolation and SLE from modular forms."""

__version__ = "0.1.0"
