"""Exact divisor-level computations on moduli spaces of stable pointed curves."""

__version__ = "0.1.0"
