"""Euclidean spanner constructions with exact verification and scaling benchmarks."""

__version__ = "0.1.0"
