"""Exact equivariant mirror-symmetry computations for local curves and local P^2."""

__version__ = "0.1.0"
