"""Exact graph polynomials, chord diagrams and partition polynomials for
one-fermion-cycle QED photon propagator graphs."""

from .graph import Edge, Graph
from .graphio import load_fixture, load_graph, parse_graph
from .poly import MultiPoly, NotDivisible, parse_poly

__version__ = "0.1.0"

__all__ = ["Edge", "Graph", "MultiPoly", "NotDivisible", "load_fixture", "load_graph", "parse_graph", "parse_poly"]
