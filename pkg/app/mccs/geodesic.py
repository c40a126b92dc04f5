"""
Geodesic tree heuristic.

A shortest-path tree is grown from the root under the edge cost
``f(i, j) = (max(w_i, 0) + max(w_j, 0)) / 2``. Restricting labelings to
``x_i <= x_parent(i)`` turns the problem into a tree knapsack that a
leaf-to-root pass solves exactly.
"""

import heapq
import logging
import math
import time
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from app.mccs.errors import InputError
from app.mccs.exact import SolveResult, SolveStats, SolveStatus, objective_of
from app.mccs.graph import Assignment, Graph, Labels
from app.mccs.weights import NodeWeights, as_weights, select_root

logger = logging.getLogger(__name__)


def edge_weight(w_i: float, w_j: float) -> float:
    return 0.5 * (max(w_i, 0.0) + max(w_j, 0.0))


@dataclass(frozen=True)
class GeodesicTree:
    """
    Shortest-path tree rooted in ``root``.

    Attributes:
        root: Root node
        parent: Parent per node; None for the root and for unreachable nodes
        dist: Geodesic distance per node, ``inf`` when unreachable
        order: Reachable nodes in settling order (parents before children)
    """
    root: int
    parent: Tuple[Optional[int], ...]
    dist: Tuple[float, ...]
    order: Tuple[int, ...]

    @property
    def n_nodes(self) -> int:
        return len(self.parent)

    def reachable(self, node: int) -> bool:
        return node == self.root or self.parent[node] is not None

    def children(self) -> List[List[int]]:
        kids: List[List[int]] = [[] for _ in range(self.n_nodes)]
        for node in self.order:
            p = self.parent[node]
            if p is not None:
                kids[p].append(node)
        return kids

    def satisfies(self, x: Labels) -> bool:
        """Whether every node is active only if its parent is (unreachable nodes must be off)."""
        labels = getattr(x, "labels", x)
        for i, v in enumerate(labels):
            if not v or i == self.root:
                continue
            p = self.parent[i]
            if p is None or not labels[p]:
                return False
        return True


def build_geodesic_tree(graph: Graph, weights: NodeWeights, root: int) -> GeodesicTree:
    """
    Dijkstra from ``root``; ties prefer fewer hops, then the smaller parent
    index, then the smaller node index.
    """
    if not 0 <= root < graph.n_nodes:
        raise InputError(f"root {root} out of range for {graph.n_nodes} nodes")
    w = as_weights(weights, graph.n_nodes).tolist()
    n = graph.n_nodes
    best: List[Optional[Tuple[float, int, int]]] = [None] * n
    best[root] = (0.0, 0, -1)
    settled = [False] * n
    parent: List[Optional[int]] = [None] * n
    dist = [math.inf] * n
    order: List[int] = []
    heap = [(0.0, 0, -1, root)]
    while heap:
        d, hops, p, i = heapq.heappop(heap)
        if settled[i] or best[i] != (d, hops, p):
            continue
        settled[i] = True
        dist[i] = d
        parent[i] = p if p >= 0 else None
        order.append(i)
        for j in graph.adjacency[i]:
            if settled[j]:
                continue
            candidate = (d + edge_weight(w[i], w[j]), hops + 1, i)
            if best[j] is None or candidate < best[j]:
                best[j] = candidate
                heapq.heappush(heap, candidate + (j,))
    return GeodesicTree(root=root, parent=tuple(parent), dist=tuple(dist), order=tuple(order))


def tree_gains(tree: GeodesicTree, weights: Sequence[float]) -> List[float]:
    """``gain(i) = w_i + sum(min(0, gain(c)))`` over tree children, unreachable nodes get ``inf``."""
    gains = [math.inf] * tree.n_nodes
    kids = tree.children()
    for i in reversed(tree.order):
        gains[i] = weights[i] + math.fsum(min(0.0, gains[c]) for c in kids[i])
    return gains


def solve_geodesic(tree: GeodesicTree, weights: NodeWeights) -> SolveResult:
    """Exact minimizer over labelings closed under taking tree parents, root active."""
    started = time.perf_counter()
    w = as_weights(weights, tree.n_nodes).tolist()
    gains = tree_gains(tree, w)
    labels = [0] * tree.n_nodes
    for i in tree.order:
        p = tree.parent[i]
        if i == tree.root:
            labels[i] = 1
        elif p is not None and labels[p] and gains[i] < 0:
            labels[i] = 1
    assignment = Assignment(tuple(labels))
    value = objective_of(assignment.labels, w)
    stats = SolveStats(wall_time=time.perf_counter() - started)
    return SolveResult(
        assignment=assignment,
        objective=value,
        status=SolveStatus.OPTIMAL,
        stats=stats,
        bound=value,
        root=tree.root,
    )


def geodesic_heuristic(graph: Graph, weights: NodeWeights, root: Optional[int] = None) -> SolveResult:
    """Build the geodesic tree and solve on it; the root defaults to :func:`select_root`."""
    started = time.perf_counter()
    if root is None:
        root = select_root(graph, weights)
    tree = build_geodesic_tree(graph, weights, root)
    result = solve_geodesic(tree, weights)
    result.stats.wall_time = time.perf_counter() - started
    logger.info("geodesic solve: root=%d objective=%.6f", root, result.objective)
    return result
