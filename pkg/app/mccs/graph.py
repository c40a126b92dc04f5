"""
Immutable node-weighted graph model, grid builders and traversal primitives.
"""

from collections import deque
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Iterable, Iterator, List, Optional, Sequence, Tuple, Union

import numpy as np

from app.mccs.errors import GraphError, InputError

NodeSet = Tuple[int, ...]


class Connectivity(str, Enum):
    """Axis-aligned grid neighborhoods."""
    TWO = "2"
    FOUR = "4"
    SIX = "6"

    @classmethod
    def for_dimension(cls, d: int) -> "Connectivity":
        return {1: cls.TWO, 2: cls.FOUR, 3: cls.SIX}[d]


@dataclass(frozen=True)
class GridMeta:
    """Grid layout of a graph built by :func:`build_grid`."""
    extents: Tuple[int, ...]
    connectivity: Connectivity


@dataclass(frozen=True)
class Graph:
    """
    Undirected simple graph over nodes ``0..n_nodes-1``.

    Attributes:
        n_nodes: Number of nodes
        adjacency: Per-node ascending tuple of neighbor indices
        grid_meta: Grid layout when the graph was built from extents
    """
    n_nodes: int
    adjacency: Tuple[NodeSet, ...]
    grid_meta: Optional[GridMeta] = None

    def neighbors(self, node: int) -> NodeSet:
        return self.adjacency[node]

    @property
    def n_edges(self) -> int:
        return sum(len(adj) for adj in self.adjacency) // 2

    def edges(self) -> Iterator[Tuple[int, int]]:
        """Yield every edge once as ``(i, j)`` with ``i < j``, in ascending order."""
        for i, adj in enumerate(self.adjacency):
            for j in adj:
                if i < j:
                    yield i, j

    def boundary(self, nodes: Iterable[int]) -> NodeSet:
        """Nodes adjacent to ``nodes`` but not contained in it."""
        members = set(nodes)
        outside = {j for i in members for j in self.adjacency[i] if j not in members}
        return tuple(sorted(outside))

    def is_connected_set(self, nodes: Iterable[int]) -> bool:
        """Whether ``nodes`` induces a connected subgraph (empty and singleton sets do)."""
        members = set(nodes)
        if len(members) <= 1:
            return True
        labels = [1 if i in members else 0 for i in range(self.n_nodes)]
        return len(connected_components(self, labels)) == 1

    def __repr__(self) -> str:
        return f"<Graph(n_nodes={self.n_nodes}, n_edges={self.n_edges})>"


@dataclass(frozen=True)
class Assignment:
    """Binary labeling of the nodes of a graph (1 = active)."""
    labels: Tuple[int, ...]

    def __post_init__(self) -> None:
        if any(v not in (0, 1) for v in self.labels):
            raise InputError("assignment labels must be 0 or 1")

    @classmethod
    def from_nodes(cls, n_nodes: int, nodes: Iterable[int]) -> "Assignment":
        labels = [0] * n_nodes
        for i in nodes:
            if not 0 <= i < n_nodes:
                raise InputError(f"node {i} out of range for {n_nodes} nodes")
            labels[i] = 1
        return cls(tuple(labels))

    @classmethod
    def empty(cls, n_nodes: int) -> "Assignment":
        return cls((0,) * n_nodes)

    @property
    def active(self) -> NodeSet:
        return tuple(i for i, v in enumerate(self.labels) if v)

    def __len__(self) -> int:
        return len(self.labels)

    def __getitem__(self, node: int) -> int:
        return self.labels[node]


Labels = Union[Assignment, Sequence[int]]


def build_grid(extents: Sequence[int], connectivity: Optional[Connectivity] = None) -> Graph:
    """
    Build a grid graph with row-major node indexing (last axis fastest).

    Args:
        extents: Number of nodes along each axis (1 to 3 axes)
        connectivity: Neighborhood; must be the axis-aligned one for the dimension

    Returns:
        Graph with ``grid_meta`` set
    """
    extents = tuple(int(e) for e in extents)
    d = len(extents)
    if not 1 <= d <= 3:
        raise GraphError(f"unsupported grid dimensionality {d}")
    if any(e < 1 for e in extents):
        raise GraphError(f"grid extents must be positive, got {extents}")

    expected = Connectivity.for_dimension(d)
    connectivity = Connectivity(connectivity) if connectivity is not None else expected
    if connectivity != expected:
        raise GraphError(f"{connectivity.value}-neighborhood is not supported for {d}D grids")

    n_nodes = int(np.prod(extents))
    index = np.arange(n_nodes).reshape(extents)
    neighbor_lists: List[List[int]] = [[] for _ in range(n_nodes)]
    for axis in range(d):
        lower = np.take(index, range(extents[axis] - 1), axis=axis).ravel()
        upper = np.take(index, range(1, extents[axis]), axis=axis).ravel()
        for i, j in zip(lower.tolist(), upper.tolist()):
            neighbor_lists[i].append(j)
            neighbor_lists[j].append(i)

    adjacency = tuple(tuple(sorted(adj)) for adj in neighbor_lists)
    return Graph(n_nodes=n_nodes, adjacency=adjacency, grid_meta=GridMeta(extents, connectivity))


def build_sparse(n_nodes: int, edges: Iterable[Tuple[int, int]]) -> Graph:
    """
    Build a graph from an explicit edge list.

    Duplicate and reversed pairs collapse to one edge; self-loops and
    out-of-range indices are rejected.
    """
    if n_nodes < 0:
        raise GraphError(f"node count must be nonnegative, got {n_nodes}")
    neighbor_sets: List[set] = [set() for _ in range(n_nodes)]
    for i, j in edges:
        i, j = int(i), int(j)
        if not (0 <= i < n_nodes and 0 <= j < n_nodes):
            raise GraphError(f"edge ({i}, {j}) out of range for {n_nodes} nodes")
        if i == j:
            raise GraphError(f"self-loop at node {i}")
        neighbor_sets[i].add(j)
        neighbor_sets[j].add(i)
    adjacency = tuple(tuple(sorted(adj)) for adj in neighbor_sets)
    return Graph(n_nodes=n_nodes, adjacency=adjacency)


def connected_components(graph: Graph, active: Labels) -> List[NodeSet]:
    """
    Split the active nodes into maximal connected sets.

    Each component is sorted ascending; components are ordered by their
    smallest member.
    """
    labels = active.labels if isinstance(active, Assignment) else active
    seen = [False] * graph.n_nodes
    components: List[NodeSet] = []
    for start in range(graph.n_nodes):
        if not labels[start] or seen[start]:
            continue
        seen[start] = True
        queue = deque([start])
        members = [start]
        while queue:
            i = queue.popleft()
            for j in graph.adjacency[i]:
                if labels[j] and not seen[j]:
                    seen[j] = True
                    members.append(j)
                    queue.append(j)
        components.append(tuple(sorted(members)))
    return components


def iter_bfs_layers(graph: Graph, seeds: Iterable[int], blocked: Callable[[int], bool]) -> Iterator[NodeSet]:
    """Lazily yield the layers of :func:`bfs_layers` until exhaustion."""
    frontier = sorted(set(seeds))
    seen = set(frontier)
    while frontier:
        nxt = set()
        for i in frontier:
            for j in graph.adjacency[i]:
                if j not in seen and not blocked(j):
                    nxt.add(j)
        if not nxt:
            return
        seen.update(nxt)
        frontier = sorted(nxt)
        yield tuple(frontier)


def bfs_layers(
    graph: Graph,
    seeds: Iterable[int],
    blocked: Callable[[int], bool],
    max_layers: int,
) -> List[NodeSet]:
    """
    Breadth-first layers around ``seeds``.

    Layer ``t`` holds the non-blocked nodes at distance ``t + 1`` from the
    seeds, where only non-blocked nodes can be crossed. The search stops after
    ``max_layers`` layers or when a layer comes out empty.
    """
    layers: List[NodeSet] = []
    if max_layers <= 0:
        return layers
    for layer in iter_bfs_layers(graph, seeds, blocked):
        layers.append(layer)
        if len(layers) >= max_layers:
            break
    return layers
