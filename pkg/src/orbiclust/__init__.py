"""Cluster algebras of unpunctured orbifolds with order-2 points and their locally free modules."""

from .cluster import COEFFICIENT_FREE, PRINCIPAL, ExchangeMatrix, Seed, exchange_graph_bfs, mutate_matrix
from .invariants import cc_function, f_polynomial, g_vector, h_vector, lf_f_polynomial, tower
from .laurent import IntPoly, LaurentPoly, parse
from .mutation import mutate_decorated, mutate_rep
from .orbifold import Arc, Triangulation, b_matrix, flip, quiver
from .reps import DecoratedRep, Rep, is_isomorphic

__version__ = "0.1.0"

__all__ = [
    "COEFFICIENT_FREE", "PRINCIPAL", "ExchangeMatrix", "Seed", "exchange_graph_bfs", "mutate_matrix",
    "cc_function", "f_polynomial", "g_vector", "h_vector", "lf_f_polynomial", "tower",
    "IntPoly", "LaurentPoly", "parse", "mutate_decorated", "mutate_rep",
    "Arc", "Triangulation", "b_matrix", "flip", "quiver", "DecoratedRep", "Rep", "is_isomorphic",
]
