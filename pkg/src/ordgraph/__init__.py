"""Exact checks for ordered-group reductions, finite P-graphs and their
matrix representations."""

__version__ = "0.1.0"
