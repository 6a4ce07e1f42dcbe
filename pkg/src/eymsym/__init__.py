"""Exact Einstein-Yang-Mills analysis of four-codimensional Lorentzian symmetric pairs."""

__version__ = "0.1.0"
