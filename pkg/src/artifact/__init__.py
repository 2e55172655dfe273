"""Exact local computations for Jacquet-Rallis type orbital integrals."""

__version__ = "0.1.0"
