"""Minimum-degree and bounded-degree spanning trees within one of optimal."""

from mdst.graph import Forest, Graph, load_graph, format_graph
from mdst.solver import SolverConfig, SolveResult, solve_auto, solve_bdst, solve_fast, solve_fr

__all__ = [
    "Forest",
    "Graph",
    "SolveResult",
    "SolverConfig",
    "format_graph",
    "load_graph",
    "solve_auto",
    "solve_bdst",
    "solve_fast",
    "solve_fr",
]
