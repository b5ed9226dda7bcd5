"""Exact deformation-theoretic invariants of isolated singularities."""
from .poly_core import INFINITE, LocalRing, Monomial, Poly, PolyVector, parse_poly

__all__ = ["INFINITE", "LocalRing", "Monomial", "Poly", "PolyVector", "parse_poly"]
