"""Directed buy-at-bulk spanner approximation."""

__version__ = "0.1.0"
