"""Exact calculus on resolution graphs of normal surface singularities."""

__version__ = "0.1.0"
