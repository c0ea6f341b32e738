"""Exact tools for the p-intersection number of graphs."""

__version__ = "0.1.0"
