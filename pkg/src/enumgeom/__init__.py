"""Exact symbolic checks for equivariant K-theoretic enumerative geometry."""

__version__ = "0.1.0"
