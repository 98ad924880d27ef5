"""Piecewise-linear cell geometry: Euler characteristics, lattice generating
functions, and the polytope zeta function."""

from .cells import (
    RationalCell, PolySet,
    decompose_open, chi, chi_bounded, weight,
    lattice_points, alpha_m, tilde_alpha,
)
from .zeta import AffineFormPW, zeta_polytope, zeta_terms

__all__ = [
    "RationalCell", "PolySet",
    "decompose_open", "chi", "chi_bounded", "weight",
    "lattice_points", "alpha_m", "tilde_alpha",
    "AffineFormPW", "zeta_polytope", "zeta_terms",
]
