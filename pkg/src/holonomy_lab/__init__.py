"""Exact holonomy computations for contact sub-Riemannian and pseudo-Hermitian structures."""

__version__ = "0.1.0"
