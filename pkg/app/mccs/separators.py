"""
Vertex separator strategies used to generate connectivity constraints.

Every strategy receives an integral labeling and an active component and
returns sets of inactive nodes whose removal cuts the component off from
the other active nodes.
"""

import logging
from collections import deque
from dataclasses import dataclass
from enum import Enum
from typing import Dict, Iterable, List, Optional, Sequence, Set

import networkx as nx
from networkx.algorithms.flow import edmonds_karp

from app.mccs.errors import InputError, SeparatorError
from app.mccs.graph import Graph, Labels, NodeSet, iter_bfs_layers

logger = logging.getLogger(__name__)

_SOURCE = "source"
_SINK = "sink"


class StrategyName(str, Enum):
    """Constraint generation strategies."""
    NEAREST = "nearest"
    MINIMAL = "minimal"
    EQUIDISTANT = "equidistant"
    K_NEAREST = "k-nearest"
    K_INTERLEAVE = "k-interleave"


@dataclass(frozen=True)
class StrategyKind:
    """A strategy plus its layer count ``k`` (only used by the k-strategies)."""
    name: StrategyName
    k: int = 1

    def __post_init__(self) -> None:
        object.__setattr__(self, "name", StrategyName(self.name))
        if self.k < 1:
            raise InputError(f"k must be at least 1, got {self.k}")

    @property
    def parametric(self) -> bool:
        return self.name in (StrategyName.K_NEAREST, StrategyName.K_INTERLEAVE)

    @property
    def label(self) -> str:
        return f"{self.name.value}({self.k})" if self.parametric else self.name.value


def _labels(x: Labels) -> Sequence[int]:
    return getattr(x, "labels", x)


def _require_active(labels: Sequence[int], nodes: Iterable[int], what: str) -> Set[int]:
    members = set(nodes)
    if not members:
        raise SeparatorError(f"{what} is empty")
    inactive = sorted(i for i in members if not labels[i])
    if inactive:
        raise SeparatorError(f"{what} contains inactive nodes {inactive}")
    return members


def _active_closure(graph: Graph, labels: Sequence[int], seeds: Iterable[int]) -> Set[int]:
    """Active nodes reachable from ``seeds`` through active nodes."""
    seen = set(seeds)
    queue = deque(seen)
    while queue:
        i = queue.popleft()
        for j in graph.adjacency[i]:
            if labels[j] and j not in seen:
                seen.add(j)
                queue.append(j)
    return seen


def nearest_separator(graph: Graph, x: Labels, component: Iterable[int]) -> NodeSet:
    """Inactive neighbors of the component."""
    labels = _labels(x)
    members = _require_active(labels, component, "component")
    boundary = graph.boundary(members)
    touching = [j for j in boundary if labels[j]]
    if touching:
        raise SeparatorError(f"component is not maximal: active neighbors {touching}")
    return boundary


def _flow_network(graph: Graph, labels: Sequence[int], source: Set[int], sink: Set[int]) -> nx.DiGraph:
    """
    Split-node network: inactive nodes carry unit capacity between their
    ``in`` and ``out`` halves, everything else is uncapacitated.
    """
    net = nx.DiGraph()
    for i in range(graph.n_nodes):
        if labels[i]:
            net.add_edge(("in", i), ("out", i))
        else:
            net.add_edge(("in", i), ("out", i), capacity=1)
    for i, j in graph.edges():
        net.add_edge(("out", i), ("in", j))
        net.add_edge(("out", j), ("in", i))
    for i in sorted(source):
        net.add_edge(_SOURCE, ("in", i))
    for j in sorted(sink):
        net.add_edge(("out", j), _SINK)
    return net


def _residual_reach(residual: nx.DiGraph, start: str, forward: bool) -> Set:
    """Nodes reachable from ``start`` (or reaching it when not ``forward``) over unsaturated arcs."""
    seen = {start}
    queue = deque([start])
    while queue:
        u = queue.popleft()
        arcs = residual.succ[u] if forward else residual.pred[u]
        for v, attr in arcs.items():
            if v not in seen and attr["capacity"] - attr["flow"] > 0:
                seen.add(v)
                queue.append(v)
    return seen


def minimal_separator(graph: Graph, x: Labels, source: Iterable[int], sink: Iterable[int]) -> NodeSet:
    """
    Minimum-cardinality inactive vertex separator between two active sets.

    Solved as a unit-capacity max-flow. The minimum cut closest to the source
    and the one closest to the sink are both extracted; the smaller wins,
    ties go to the source side.
    """
    labels = _labels(x)
    src = _require_active(labels, source, "source")
    snk = _require_active(labels, sink, "sink")
    if src & snk:
        raise SeparatorError("source and sink overlap")
    if _active_closure(graph, labels, src) & snk:
        raise SeparatorError("source and sink are already connected through active nodes")

    net = _flow_network(graph, labels, src, snk)
    try:
        residual = edmonds_karp(net, _SOURCE, _SINK)
    except nx.NetworkXUnbounded as exc:
        raise SeparatorError("source and sink are already connected through active nodes") from exc

    from_source = _residual_reach(residual, _SOURCE, forward=True)
    to_sink = _residual_reach(residual, _SINK, forward=False)
    inactive = [i for i in range(graph.n_nodes) if not labels[i]]
    source_side = tuple(i for i in inactive if ("in", i) in from_source and ("out", i) not in from_source)
    sink_side = tuple(i for i in inactive if ("out", i) in to_sink and ("in", i) not in to_sink)
    logger.debug(
        "max-flow %s between %d and %d active nodes",
        residual.graph["flow_value"], len(src), len(snk),
    )
    return sink_side if len(sink_side) < len(source_side) else source_side


def _inactive_distances(graph: Graph, labels: Sequence[int], seeds: Set[int]) -> Dict[int, int]:
    distances: Dict[int, int] = {}
    for depth, layer in enumerate(iter_bfs_layers(graph, seeds, lambda j: bool(labels[j])), start=1):
        for j in layer:
            distances[j] = depth
    return distances


def equidistant_separator(graph: Graph, x: Labels, component: Iterable[int], others: Iterable[int]) -> NodeSet:
    """
    Inactive nodes where breadth-first fronts from both sides meet.

    Distances only count inactive nodes. A node equally far from both sides
    is a meeting node; when the fronts meet across an edge the node on the
    component side is taken. An empty result means no inactive path joins
    the two sides.
    """
    labels = _labels(x)
    comp = _require_active(labels, component, "component")
    other = _require_active(labels, others, "others")
    if comp & other:
        raise SeparatorError("component and others overlap")
    if _active_closure(graph, labels, comp) & other:
        raise SeparatorError("component and others are joined through active nodes")

    d_comp = _inactive_distances(graph, labels, comp)
    d_other = _inactive_distances(graph, labels, other)
    separator = []
    for v in sorted(d_comp.keys() & d_other.keys()):
        dc, do = d_comp[v], d_other[v]
        if dc == do:
            separator.append(v)
        elif dc < do and any(
            u in d_comp and u in d_other and d_other[u] < d_comp[u]
            for u in graph.adjacency[v]
        ):
            separator.append(v)
    if not separator:
        logger.debug("equidistant separator: component %s unreachable from others", sorted(comp)[:5])
    return tuple(separator)


def k_separators(graph: Graph, x: Labels, component: Iterable[int], k: int, interleave: bool = False) -> List[NodeSet]:
    """
    Breadth-first distance layers around the component, used as separators.

    Collects up to ``min(k, |component|)`` layers. The first layer touching a
    foreign active node is the last one considered. With ``interleave`` only
    layers at even distance are kept, falling back to the nearest layer when
    none qualifies.
    """
    if k < 1:
        raise InputError(f"k must be at least 1, got {k}")
    labels = _labels(x)
    comp = _require_active(labels, component, "component")
    cap = min(k, len(comp))
    nearest: Optional[NodeSet] = None
    collected: List[NodeSet] = []
    for depth, layer in enumerate(iter_bfs_layers(graph, comp, lambda j: bool(labels[j])), start=1):
        if nearest is None:
            nearest = layer
        if not interleave or depth % 2 == 0:
            collected.append(layer)
            if len(collected) >= cap:
                break
        touches_foreign = any(
            labels[j] and j not in comp
            for i in layer
            for j in graph.adjacency[i]
        )
        if touches_foreign:
            break
    if not collected and nearest is not None:
        collected.append(nearest)
    return collected


def find_separators(
    graph: Graph,
    x: Labels,
    component: NodeSet,
    target: NodeSet,
    strategy: StrategyKind,
) -> List[NodeSet]:
    """
    Dispatch a strategy for one violating component.

    ``target`` is the component the separators must cut ``component`` off
    from (the root's component, or the first component when unrooted).
    """
    labels = _labels(x)
    name = strategy.name
    if name is StrategyName.NEAREST:
        return [nearest_separator(graph, labels, component)]
    if name is StrategyName.MINIMAL:
        return [minimal_separator(graph, labels, component, target)]
    if name is StrategyName.EQUIDISTANT:
        members = set(component)
        others = [i for i, v in enumerate(labels) if v and i not in members]
        return [equidistant_separator(graph, labels, component, others)]
    layers = k_separators(graph, labels, component, strategy.k, interleave=name is StrategyName.K_INTERLEAVE)
    return layers or [()]
