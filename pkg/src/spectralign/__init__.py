"""Spectral similarity of graphs under vertex permutations."""

__version__ = "0.1.0"
