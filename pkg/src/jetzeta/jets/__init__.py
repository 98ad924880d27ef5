"""Jet-space point counting over finite fields and class recovery in L."""

from .poly import MultiPoly, parse_poly
from .system import JetConstraintSystem, build_jet_system, multiplicity
from .count import count_points, naive_count
from .classify import (
    CountTable, ClassPoly, JetClass,
    good_primes, collect_counts, interpolate_class,
    class_of_jets, lefschetz_via_jets, zeta_via_jets, milnor_fiber_limit,
)

__all__ = [
    "MultiPoly", "parse_poly",
    "JetConstraintSystem", "build_jet_system", "multiplicity",
    "count_points", "naive_count",
    "CountTable", "ClassPoly", "JetClass",
    "good_primes", "collect_counts", "interpolate_class",
    "class_of_jets", "lefschetz_via_jets", "zeta_via_jets",
    "milnor_fiber_limit",
]
