"""
Exact minimum cost connected subgraph solver.

Best-first branch-and-cut over node fixings. Each search node is
propagated against the constraint pool, bounded by its objective-only
completion, and either accepted (the completion is connected), branched
on a violated stored constraint, or separated to generate new ones.
"""

import heapq
import logging
import math
import time
from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from typing import List, Optional, Sequence, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator

from app.config import settings
from app.mccs.constraints import (
    FREE,
    Conflict,
    Constraint,
    ConstraintKind,
    ConstraintStore,
    PartialAssignment,
    component_leaf_cut,
    constraints_from_separator,
    propagate_in_place,
    singleton_leaf_cuts,
)
from app.mccs.errors import InputError
from app.mccs.graph import Assignment, Graph, Labels, NodeSet, connected_components
from app.mccs.separators import StrategyKind, StrategyName, find_separators
from app.mccs.weights import NodeWeights, as_weights, select_root

logger = logging.getLogger(__name__)


class SolveStatus(str, Enum):
    """Termination status of a solver run."""
    OPTIMAL = "optimal"
    GAP_REACHED = "gap_reached"
    TIME_LIMIT = "time_limit"
    NODE_LIMIT = "node_limit"
    INFEASIBLE = "infeasible"


class SolverConfig(BaseModel):
    """
    Options of the exact solver.

    Attributes:
        strategy: Constraint generation strategy
        k: Layer count of the k-strategies
        rooted: Enforce connectivity towards a root instead of pairwise
        root: Root node; picked automatically when rooted and left unset
        rel_gap: Relative optimality gap at which nodes are pruned
        time_limit: Wall-clock limit in seconds
        node_limit: Maximum number of expanded search nodes
        use_singleton_leaf_cuts: Install single-node leaf cuts before search
        use_component_leaf_cuts: Generate leaf cuts for larger sets while separating
        connectivity_propagation: Fix nodes cut off from the root by zero-fixed nodes
    """
    model_config = ConfigDict(frozen=True)

    strategy: StrategyName = Field(default=StrategyName.NEAREST, description="Constraint generation strategy")
    k: int = Field(default=4, ge=1, description="Layer count for k-nearest / k-interleave")
    rooted: bool = Field(default=True, description="Rooted formulation")
    root: Optional[int] = Field(default=None, ge=0, description="Root node index")
    rel_gap: float = Field(default=1e-4, ge=0.0, description="Relative optimality gap")
    time_limit: Optional[float] = Field(default=None, gt=0.0, description="Time limit in seconds")
    node_limit: Optional[int] = Field(default=None, gt=0, description="Search node limit")
    use_singleton_leaf_cuts: bool = Field(default=True, description="Install single-node leaf cuts upfront")
    use_component_leaf_cuts: bool = Field(default=False, description="Separate leaf cuts for larger sets")
    connectivity_propagation: bool = Field(default=True, description="Reachability fixing during search")

    @model_validator(mode="after")
    def _root_only_when_rooted(self) -> "SolverConfig":
        if not self.rooted and self.root is not None:
            raise ValueError("an unrooted configuration cannot name a root")
        return self

    @classmethod
    def from_settings(cls, **overrides) -> "SolverConfig":
        """Configuration defaulted from the application settings."""
        values = {
            "k": settings.default_k,
            "rel_gap": settings.default_rel_gap,
            "time_limit": settings.default_time_limit,
            "use_singleton_leaf_cuts": settings.leaf_cuts_default,
            "connectivity_propagation": settings.connectivity_propagation,
        }
        values.update({key: value for key, value in overrides.items() if value is not None})
        return cls(**values)

    @property
    def strategy_kind(self) -> StrategyKind:
        return StrategyKind(self.strategy, self.k)


@dataclass
class SolveStats:
    search_nodes_expanded: int = 0
    constraints_generated: int = 0
    incumbent_updates: int = 0
    wall_time: float = 0.0
    leaf_cuts_installed: int = 0
    separation_rounds: int = 0


@dataclass
class SolveResult:
    """
    Outcome of a solver run.

    Attributes:
        assignment: Best labeling found
        objective: Sum of the weights of its active nodes
        status: Termination status
        stats: Search statistics
        bound: Lower bound on the optimum known at termination
        root: Root used, if any
    """
    assignment: Assignment
    objective: float
    status: SolveStatus
    stats: SolveStats = field(default_factory=SolveStats)
    bound: float = -math.inf
    root: Optional[int] = None

    def __repr__(self) -> str:
        return f"<SolveResult(status={self.status.value}, objective={self.objective})>"


def objective_of(labels: Sequence[int], weights: Sequence[float]) -> float:
    return math.fsum(weights[i] for i, v in enumerate(labels) if v)


def lower_bound(partial: PartialAssignment, weights: Sequence[float]) -> float:
    """Objective-only bound: fixed-active weights plus every favourable free weight."""
    return math.fsum(
        w for v, w in zip(partial.values, weights)
        if v == 1 or (v == FREE and w < 0)
    )


def greedy_completion(partial: PartialAssignment, weights: Sequence[float]) -> Assignment:
    """Complete free nodes by sign: active iff the weight is negative."""
    return Assignment(tuple(
        v if v != FREE else (1 if w < 0 else 0)
        for v, w in zip(partial.values, weights)
    ))


def branch(partial: PartialAssignment, violated: Constraint) -> List[PartialAssignment]:
    """
    Children that split the node's space along a violated inequality.

    The children are disjoint, together cover every labeling of the parent
    that satisfies ``violated``, and each fixes at least one more node.
    """
    values = partial.values
    children: List[PartialAssignment] = []

    def child(fixings: List[Tuple[int, int]]) -> None:
        node = partial.copy()
        try:
            for i, v in fixings:
                node.fix(i, v)
        except InputError:
            return
        children.append(node)

    if violated.kind is ConstraintKind.LEAF_CUT:
        free = [j for j in violated.support if values[j] == FREE]
        pivot = free[0] if free else (violated.targets[0] if values[violated.targets[0]] == FREE else None)
        if pivot is not None:
            child([(pivot, 0)])
            child([(pivot, 1)])
        return children

    active_targets: List[Tuple[int, int]] = []
    for t in violated.targets:
        if values[t] == FREE:
            child(active_targets + [(t, 0)])
        active_targets.append((t, 1))
    excluded: List[Tuple[int, int]] = []
    for k in violated.support:
        if values[k] != FREE:
            continue
        child(active_targets + excluded + [(k, 1)])
        excluded.append((k, 0))
    return children


def _positive_leaf_sets(graph: Graph, labels: Sequence[int], weights: Sequence[float], root: Optional[int]) -> List[NodeSet]:
    """Maximal connected sets of active unfavourable non-root nodes with fewer than two active neighbors."""
    positive = [1 if labels[i] and weights[i] > 0 and i != root else 0 for i in range(graph.n_nodes)]
    leaves = []
    for U in connected_components(graph, positive):
        if sum(labels[j] for j in graph.boundary(U)) < 2:
            leaves.append(U)
    return leaves


def _separate(
    graph: Graph,
    x: Labels,
    config: SolverConfig,
    store: ConstraintStore,
    weights: Optional[Sequence[float]] = None,
) -> List[Constraint]:
    labels = getattr(x, "labels", x)
    components = connected_components(graph, labels)
    strategy = config.strategy_kind
    added: List[Constraint] = []

    if config.rooted:
        root = config.root
        if root is None or not labels[root]:
            raise InputError("rooted separation needs an active root")
        anchor = next(comp for comp in components if root in comp)
        for comp in components:
            if comp is anchor:
                continue
            for S in find_separators(graph, labels, comp, anchor, strategy):
                added.extend(store.extend(constraints_from_separator(comp, S, root=root)))
    elif len(components) > 1:
        anchor = components[0]
        for comp in components[1:]:
            for S in find_separators(graph, labels, comp, anchor, strategy):
                added.extend(store.extend(constraints_from_separator(comp, S, witness=anchor[0])))

    if config.use_component_leaf_cuts and weights is not None:
        for U in _positive_leaf_sets(graph, labels, weights, config.root):
            added.extend(store.extend(component_leaf_cut(graph, weights, U, config.root)))
    return added


def separate(
    graph: Graph,
    x: Labels,
    config: SolverConfig,
    store: ConstraintStore,
    weights: Optional[Sequence[float]] = None,
) -> int:
    """
    Add constraints violated by an integral labeling.

    Rooted: every active component without the root is separated from the
    root's component. Unrooted: every component after the first is
    separated from the first. Returns the number of new constraints, which
    is zero exactly when ``x`` is feasible.
    """
    return len(_separate(graph, x, config, store, weights))


def _propagate_reachability(graph: Graph, partial: PartialAssignment) -> Optional[bool]:
    """
    Fix to 0 every free node cut off from the root (or the fixed-active
    nodes) by zero-fixed nodes. Returns None on conflict, else whether
    anything was fixed.
    """
    values = partial.values
    if partial.root is not None:
        start = partial.root
    else:
        start = next((i for i, v in enumerate(values) if v == 1), None)
        if start is None:
            return False
    seen = [False] * len(values)
    seen[start] = True
    queue = deque([start])
    while queue:
        i = queue.popleft()
        for j in graph.adjacency[i]:
            if not seen[j] and values[j] != 0:
                seen[j] = True
                queue.append(j)
    changed = False
    for i, v in enumerate(values):
        if seen[i] or v == 0:
            continue
        if v == 1:
            return None
        values[i] = 0
        changed = True
    return changed


class _Search:
    """State of one best-first branch-and-cut run."""

    def __init__(self, graph: Graph, weights: List[float], config: SolverConfig, root: Optional[int]):
        self.graph = graph
        self.weights = weights
        self.config = config
        self.root = root
        self.store = ConstraintStore()
        self.stats = SolveStats()
        self.heap: List[Tuple[float, int, PartialAssignment]] = []
        self.sequence = 0
        self.gap_floor = math.inf

        n = graph.n_nodes
        self.incumbent = Assignment.from_nodes(n, [root]) if root is not None else Assignment.empty(n)
        self.incumbent_objective = objective_of(self.incumbent.labels, weights)

    def threshold(self) -> float:
        z = self.incumbent_objective
        return z - self.config.rel_gap * abs(z)

    def prunable(self, bound: float) -> bool:
        if bound >= self.incumbent_objective:
            return True
        if bound >= self.threshold():
            self.gap_floor = min(self.gap_floor, bound)
            return True
        return False

    def push(self, partial: PartialAssignment) -> None:
        heapq.heappush(self.heap, (lower_bound(partial, self.weights), self.sequence, partial))
        self.sequence += 1

    def settle(self, partial: PartialAssignment) -> bool:
        """Propagate constraints and reachability to a joint fixpoint; False on conflict."""
        while True:
            if isinstance(propagate_in_place(self.store, partial), Conflict):
                return False
            if not self.config.connectivity_propagation:
                return True
            changed = _propagate_reachability(self.graph, partial)
            if changed is None:
                return False
            if not changed:
                return True

    def accept(self, x: Assignment) -> None:
        value = objective_of(x.labels, self.weights)
        if value < self.incumbent_objective:
            self.incumbent = x
            self.incumbent_objective = value
            self.stats.incumbent_updates += 1
            logger.debug("incumbent %.6f after %d nodes", value, self.stats.search_nodes_expanded)

    def run(self, started: float) -> SolveStatus:
        config = self.config
        if config.use_singleton_leaf_cuts:
            self.stats.leaf_cuts_installed = len(self.store.extend(
                singleton_leaf_cuts(self.graph, self.weights, self.root)
            ))
        self.push(PartialAssignment.free(self.graph.n_nodes, self.root))

        while self.heap:
            if config.time_limit is not None and time.perf_counter() - started > config.time_limit:
                return SolveStatus.TIME_LIMIT
            if config.node_limit is not None and self.stats.search_nodes_expanded >= config.node_limit:
                return SolveStatus.NODE_LIMIT

            bound, _, partial = heapq.heappop(self.heap)
            if self.prunable(bound):
                continue
            self.stats.search_nodes_expanded += 1
            if not self.settle(partial):
                continue
            if self.prunable(lower_bound(partial, self.weights)):
                continue

            x = greedy_completion(partial, self.weights)
            violated = self.store.first_violated(x.labels)
            if violated is None:
                added = _separate(self.graph, x, config, self.store, self.weights)
                if not added:
                    self.accept(x)
                    continue
                self.stats.separation_rounds += 1
                logger.debug("separation round %d: %d constraints added", self.stats.separation_rounds, len(added))
                self.stats.constraints_generated += len(added)
                violated = added[0]
            for child in branch(partial, violated):
                self.push(child)

        return SolveStatus.GAP_REACHED if self.gap_floor < self.incumbent_objective else SolveStatus.OPTIMAL

    def final_bound(self, status: SolveStatus) -> float:
        if status is SolveStatus.OPTIMAL:
            return self.incumbent_objective
        open_bounds = [entry[0] for entry in self.heap]
        return min([self.incumbent_objective, self.gap_floor] + open_bounds)


def solve_exact(graph: Graph, weights: NodeWeights, config: Optional[SolverConfig] = None) -> SolveResult:
    """
    Minimize the total weight over connected labelings.

    In rooted mode the root is always active and defaults to
    :func:`select_root`. The result is optimal within ``config.rel_gap``
    unless a time or node limit stopped the search, in which case the best
    labeling found so far is returned.
    """
    config = config or SolverConfig()
    if graph.n_nodes == 0:
        raise InputError("cannot solve on an empty graph")
    w = as_weights(weights, graph.n_nodes)
    root: Optional[int] = None
    if config.rooted:
        root = config.root if config.root is not None else select_root(graph, w)
        if not 0 <= root < graph.n_nodes:
            raise InputError(f"root {root} out of range for {graph.n_nodes} nodes")
        config = config.model_copy(update={"root": root})

    started = time.perf_counter()
    search = _Search(graph, w.tolist(), config, root)
    logger.info(
        "exact solve: %d nodes, strategy=%s, root=%s, leaf_cuts=%s",
        graph.n_nodes, config.strategy_kind.label, root, config.use_singleton_leaf_cuts,
    )
    status = search.run(started)
    search.stats.wall_time = time.perf_counter() - started

    result = SolveResult(
        assignment=search.incumbent,
        objective=search.incumbent_objective,
        status=status,
        stats=search.stats,
        bound=search.final_bound(status),
        root=root,
    )
    logger.info(
        "exact solve finished: status=%s objective=%.6f nodes=%d constraints=%d",
        status.value, result.objective, search.stats.search_nodes_expanded, search.stats.constraints_generated,
    )
    return result
