"""
Minimum cost connected subgraph solvers.

Exact branch-and-cut with lazy separator constraints, the geodesic tree
heuristic and the Maxcomp baseline.
"""

from app.mccs.evaluation import Scores, maxcomp, objective, objectives_match, score
from app.mccs.exact import SolveResult, SolverConfig, SolveStats, SolveStatus, solve_exact
from app.mccs.geodesic import build_geodesic_tree, geodesic_heuristic, solve_geodesic
from app.mccs.graph import Assignment, Graph, build_grid, build_sparse, connected_components
from app.mccs.separators import StrategyKind, StrategyName
from app.mccs.weights import prob_to_weight, probabilities_to_weights, select_root

__all__ = [
    "Assignment",
    "Graph",
    "Scores",
    "SolveResult",
    "SolveStats",
    "SolveStatus",
    "SolverConfig",
    "StrategyKind",
    "StrategyName",
    "build_geodesic_tree",
    "build_grid",
    "build_sparse",
    "connected_components",
    "geodesic_heuristic",
    "maxcomp",
    "objective",
    "objectives_match",
    "prob_to_weight",
    "probabilities_to_weights",
    "score",
    "select_root",
    "solve_exact",
    "solve_geodesic",
]
