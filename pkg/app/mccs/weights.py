"""
Node costs from probability estimates, and root selection.
"""

import math
from typing import Iterable, Sequence, Union

import numpy as np

from app.mccs.errors import InputError
from app.mccs.graph import Graph, connected_components

DEFAULT_EPS = 1e-6

NodeWeights = np.ndarray


def _check_eps(eps: float) -> None:
    if not 0.0 < eps < 0.5:
        raise InputError(f"clamp bound must lie in (0, 0.5), got {eps}")


def prob_to_weight(p: float, eps: float = DEFAULT_EPS) -> float:
    """
    Negative log-odds of a foreground probability.

    ``p`` is clamped to ``[eps, 1 - eps]`` first so the weight stays finite.
    """
    _check_eps(eps)
    if not 0.0 <= p <= 1.0 or math.isnan(p):
        raise InputError(f"probability {p} outside [0, 1]")
    q = min(max(p, eps), 1.0 - eps)
    return -math.log(q / (1.0 - q))


def probabilities_to_weights(probabilities: Union[Sequence[float], np.ndarray], eps: float = DEFAULT_EPS) -> NodeWeights:
    """Vectorized :func:`prob_to_weight` over a whole probability map."""
    _check_eps(eps)
    p = np.asarray(probabilities, dtype=np.float64).ravel()
    if np.isnan(p).any() or (p < 0.0).any() or (p > 1.0).any():
        raise InputError("probabilities must lie in [0, 1]")
    q = np.clip(p, eps, 1.0 - eps)
    return -np.log(q / (1.0 - q))


def as_weights(values: Union[Iterable[float], np.ndarray], n_nodes: int) -> NodeWeights:
    """Validate a weight vector against a node count."""
    if not isinstance(values, np.ndarray):
        values = list(values)
    w = np.asarray(values, dtype=np.float64).ravel()
    if w.shape[0] != n_nodes:
        raise InputError(f"expected {n_nodes} weights, got {w.shape[0]}")
    if not np.isfinite(w).all():
        raise InputError("weights must be finite")
    return w


def pick_component(components: Sequence[Sequence[int]], weights: Sequence[float]) -> Sequence[int]:
    """Largest component by node count; ties go to lower total weight, then smaller first member."""
    return min(
        components,
        key=lambda comp: (-len(comp), math.fsum(weights[i] for i in comp), comp[0]),
    )


def _argmin(nodes: Iterable[int], weights: Sequence[float]) -> int:
    return min(nodes, key=lambda i: (weights[i], i))


def select_root(graph: Graph, weights: NodeWeights) -> int:
    """
    Strongest node of the largest favourable component.

    Favourable nodes are those with negative weight. Without any, the
    global minimum-weight node is returned.
    """
    if graph.n_nodes == 0:
        raise InputError("cannot select a root in an empty graph")
    w = as_weights(weights, graph.n_nodes).tolist()
    favourable = [1 if wi < 0 else 0 for wi in w]
    components = connected_components(graph, favourable)
    if not components:
        return _argmin(range(graph.n_nodes), w)
    return _argmin(pick_component(components, w), w)
