"""Truncated Hardy-Littlewood maximal functions on non-doubling spaces."""

__version__ = "0.1.0"
