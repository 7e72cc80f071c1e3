"""Noncommutative-geometry toolkit for the Hopf fibration S^3 -> S^2.

Exact arithmetic in the coordinate algebra of SU(2), its Hopf structure, the
idempotents of the monopole line bundles, their Chern numbers, the monopole
connection, and a few topological companions.
"""

from .algebra import Poly, Monomial, Scalar, parse, render, normal_form

__version__ = "0.1.0"

__all__ = ["Poly", "Monomial", "Scalar", "parse", "render", "normal_form", "__version__"]
