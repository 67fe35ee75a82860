"""Seifert geometries of cone-manifolds obtained by surgery on the trefoil knot."""

__version__ = "0.1.0"
