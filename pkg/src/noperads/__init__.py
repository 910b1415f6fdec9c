"""Finite combinatorics of n-operads, substitudes and their classifiers."""

__version__ = "0.1.0"
