"""Exact engine for quaternion algebras, hermitian forms and outer automorphisms."""

__version__ = "0.1.0"
