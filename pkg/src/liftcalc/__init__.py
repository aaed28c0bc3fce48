"""Symbolic lifts of tensor fields to higher-order extended manifolds."""

__version__ = "0.1.0"
