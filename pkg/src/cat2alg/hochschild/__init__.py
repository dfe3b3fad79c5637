"""Finite-dimensional algebras over Q: modules, bimodules, Hochschild data, fiber squares."""
