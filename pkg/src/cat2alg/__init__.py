"""Computational companion for categorical 2-algebra: 2-groups, Lie 2-algebras, Hochschild data."""
__version__ = "0.1.0"
