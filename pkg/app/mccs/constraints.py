"""
Linear inequalities describing connected subgraphs.

Three kinds are used:

* rooted separator    ``x_i <= sum(x_k for k in S)``
* pairwise separator  ``x_i + x_j - 1 <= sum(x_k for k in S)``
* leaf cut            ``2 x_i <= sum(x_j for j in B)``

Separator constraints hold for every connected labeling; leaf cuts only
remove labelings that are provably not optimal.
"""

import logging
from collections import deque
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple, Union

from app.mccs.errors import InputError
from app.mccs.graph import Assignment, Graph, Labels, NodeSet
from app.mccs.weights import NodeWeights

logger = logging.getLogger(__name__)

FREE = -1


class ConstraintKind(str, Enum):
    """Constraint families."""
    ROOTED_SEPARATOR = "rooted_separator"
    PAIRWISE_SEPARATOR = "pairwise_separator"
    LEAF_CUT = "leaf_cut"


@dataclass(frozen=True)
class Constraint:
    """
    One inequality over node variables.

    Attributes:
        kind: Constraint family
        targets: ``(i,)`` or, for pairwise separators, ``(i, j)`` with ``i < j``
        support: Ascending separator set ``S`` or leaf boundary ``B``
        creation_index: Position in the owning store, -1 until stored
    """
    kind: ConstraintKind
    targets: NodeSet
    support: NodeSet
    creation_index: int = field(default=-1, compare=False)

    @property
    def key(self) -> Tuple[ConstraintKind, NodeSet, NodeSet]:
        return self.kind, self.targets, self.support

    @property
    def nodes(self) -> NodeSet:
        return self.targets + self.support

    def lhs(self, labels: Sequence[int]) -> int:
        if self.kind is ConstraintKind.LEAF_CUT:
            return 2 * labels[self.targets[0]]
        if self.kind is ConstraintKind.PAIRWISE_SEPARATOR:
            return labels[self.targets[0]] + labels[self.targets[1]] - 1
        return labels[self.targets[0]]

    def rhs(self, labels: Sequence[int]) -> int:
        return sum(labels[k] for k in self.support)

    def __str__(self) -> str:
        rhs = " + ".join(f"x_{k}" for k in self.support) or "0"
        if self.kind is ConstraintKind.LEAF_CUT:
            lhs = f"2*x_{self.targets[0]}"
        elif self.kind is ConstraintKind.PAIRWISE_SEPARATOR:
            lhs = f"x_{self.targets[0]} + x_{self.targets[1]} - 1"
        else:
            lhs = f"x_{self.targets[0]}"
        return f"{lhs} <= {rhs}"


def rooted_separator(target: int, separator: Iterable[int]) -> Constraint:
    support = tuple(sorted(set(separator)))
    if target in support:
        raise InputError(f"target {target} inside its own separator")
    return Constraint(ConstraintKind.ROOTED_SEPARATOR, (target,), support)


def pairwise_separator(first: int, second: int, separator: Iterable[int]) -> Constraint:
    support = tuple(sorted(set(separator)))
    if first == second:
        raise InputError("pairwise separator needs two distinct targets")
    if first in support or second in support:
        raise InputError(f"targets ({first}, {second}) overlap their separator")
    return Constraint(ConstraintKind.PAIRWISE_SEPARATOR, tuple(sorted((first, second))), support)


def leaf_cut(target: int, boundary: Iterable[int]) -> Constraint:
    support = tuple(sorted(set(boundary)))
    if target in support:
        raise InputError(f"target {target} inside its own boundary")
    return Constraint(ConstraintKind.LEAF_CUT, (target,), support)


def constraints_from_separator(
    component: Iterable[int],
    separator: Iterable[int],
    root: Optional[int] = None,
    witness: Optional[int] = None,
) -> List[Constraint]:
    """
    Instantiate separator inequalities for every node of a component.

    With ``root`` the rooted form is generated, otherwise the pairwise form
    against ``witness``, a node of the opposing component.
    """
    members = sorted(set(component))
    sep = set(separator)
    if sep.intersection(members):
        raise InputError("component and separator overlap")
    if root is not None:
        if root in members:
            raise InputError(f"root {root} lies inside the separated component")
        return [rooted_separator(i, sep) for i in members]
    if witness is None:
        raise InputError("pairwise separator constraints need a witness node")
    if witness in members or witness in sep:
        raise InputError(f"witness {witness} must lie outside the component and the separator")
    return [pairwise_separator(i, witness, sep) for i in members]


def singleton_leaf_cuts(graph: Graph, weights: NodeWeights, root: Optional[int] = None) -> List[Constraint]:
    """``2 x_i <= sum(N(i))`` for every unfavourable non-root node."""
    return [
        leaf_cut(i, graph.neighbors(i))
        for i in range(graph.n_nodes)
        if weights[i] > 0 and i != root
    ]


def component_leaf_cut(
    graph: Graph,
    weights: NodeWeights,
    U: Iterable[int],
    root: Optional[int] = None,
) -> List[Constraint]:
    """Leaf cuts for a connected set of unfavourable nodes against its joint boundary."""
    members = tuple(sorted(set(U)))
    if not members:
        raise InputError("leaf cut needs a nonempty node set")
    if root is not None and root in members:
        raise InputError("leaf cuts never include the root")
    if any(weights[i] <= 0 for i in members):
        raise InputError("leaf cut sets may only contain nodes with positive weight")
    if not graph.is_connected_set(members):
        raise InputError(f"node set {members} is not connected")
    boundary = graph.boundary(members)
    return [leaf_cut(i, boundary) for i in members]


def is_violated(c: Constraint, x: Labels) -> bool:
    labels = x.labels if isinstance(x, Assignment) else x
    return c.lhs(labels) > c.rhs(labels)


class ConstraintStore:
    """Insertion-ordered, deduplicated pool of constraints."""

    def __init__(self, constraints: Iterable[Constraint] = ()):
        self._items: List[Constraint] = []
        self._keys: Dict[tuple, Constraint] = {}
        self._by_target: Dict[int, List[int]] = {}
        self._by_node: Dict[int, List[int]] = {}
        self.extend(constraints)

    def add(self, c: Constraint) -> Optional[Constraint]:
        """Store ``c`` unless an identical inequality exists; returns the stored copy or None."""
        if c.key in self._keys:
            return None
        index = len(self._items)
        stored = replace(c, creation_index=index)
        self._items.append(stored)
        self._keys[c.key] = stored
        for t in stored.targets:
            self._by_target.setdefault(t, []).append(index)
        for k in stored.nodes:
            self._by_node.setdefault(k, []).append(index)
        return stored

    def extend(self, constraints: Iterable[Constraint]) -> List[Constraint]:
        added = []
        for c in constraints:
            stored = self.add(c)
            if stored is not None:
                added.append(stored)
        return added

    def watching(self, node: int) -> List[int]:
        """Indices of constraints that mention ``node``."""
        return self._by_node.get(node, [])

    def first_violated(self, x: Labels) -> Optional[Constraint]:
        """Violated constraint with the smallest creation index, if any."""
        labels = x.labels if isinstance(x, Assignment) else x
        best: Optional[int] = None
        for t, indices in self._by_target.items():
            if not labels[t]:
                continue
            for index in indices:
                if best is not None and index >= best:
                    break
                if is_violated(self._items[index], labels):
                    best = index
                    break
        return None if best is None else self._items[best]

    def __contains__(self, c: Constraint) -> bool:
        return c.key in self._keys

    def __getitem__(self, index: int) -> Constraint:
        return self._items[index]

    def __iter__(self) -> Iterator[Constraint]:
        return iter(self._items)

    def __len__(self) -> int:
        return len(self._items)


class PartialAssignment:
    """
    Ternary labeling used by search nodes: 0, 1 or FREE (-1) per node.

    The root, when given, can never be fixed to 0.
    """

    __slots__ = ("values", "root")

    def __init__(self, values: Sequence[int], root: Optional[int] = None):
        self.values: List[int] = list(values)
        self.root = root
        if any(v not in (0, 1, FREE) for v in self.values):
            raise InputError("partial assignment values must be 0, 1 or FREE")
        if root is not None and self.values[root] == 0:
            raise InputError(f"root {root} fixed inactive")

    @classmethod
    def free(cls, n_nodes: int, root: Optional[int] = None) -> "PartialAssignment":
        values = [FREE] * n_nodes
        if root is not None:
            values[root] = 1
        return cls(values, root)

    @classmethod
    def from_fixings(cls, n_nodes: int, fixings: Mapping[int, int], root: Optional[int] = None) -> "PartialAssignment":
        partial = cls.free(n_nodes, root)
        for node, value in fixings.items():
            partial.fix(node, value)
        return partial

    def fix(self, node: int, value: int) -> None:
        current = self.values[node]
        if current != FREE and current != value:
            raise InputError(f"node {node} already fixed to {current}")
        if value == 0 and node == self.root:
            raise InputError(f"root {node} cannot be fixed inactive")
        self.values[node] = value

    def copy(self) -> "PartialAssignment":
        clone = PartialAssignment.__new__(PartialAssignment)
        clone.values = list(self.values)
        clone.root = self.root
        return clone

    def is_free(self, node: int) -> bool:
        return self.values[node] == FREE

    @property
    def free_nodes(self) -> NodeSet:
        return tuple(i for i, v in enumerate(self.values) if v == FREE)

    def __len__(self) -> int:
        return len(self.values)

    def __repr__(self) -> str:
        fixed = {i: v for i, v in enumerate(self.values) if v != FREE}
        return f"<PartialAssignment(n={len(self.values)}, fixed={fixed})>"


@dataclass(frozen=True)
class Fixings:
    fixings: Tuple[Tuple[int, int], ...]


@dataclass(frozen=True)
class Conflict:
    constraint: Optional[Constraint]


@dataclass(frozen=True)
class Quiescent:
    pass


PropagationResult = Union[Fixings, Conflict, Quiescent]


def _implied(c: Constraint, values: List[int]) -> Union[List[Tuple[int, int]], Conflict]:
    """Fixings forced by a single constraint under ``values``, or a conflict."""
    if c.kind is ConstraintKind.LEAF_CUT:
        t = c.targets[0]
        candidates = [j for j in c.support if values[j] != 0]
        if values[t] == 1:
            if len(candidates) < 2:
                return Conflict(c)
            if len(candidates) == 2:
                return [(j, 1) for j in candidates if values[j] == FREE]
        elif values[t] == FREE and len(candidates) < 2:
            return [(t, 0)]
        return []

    if any(values[k] == 1 for k in c.support):
        return []
    free = [k for k in c.support if values[k] == FREE]
    if c.kind is ConstraintKind.ROOTED_SEPARATOR:
        t = c.targets[0]
        if values[t] == 1:
            if not free:
                return Conflict(c)
            if len(free) == 1:
                return [(free[0], 1)]
        elif values[t] == FREE and not free:
            return [(t, 0)]
        return []

    a, b = c.targets
    if values[a] == 1 and values[b] == 1:
        if not free:
            return Conflict(c)
        if len(free) == 1:
            return [(free[0], 1)]
    elif not free:
        if values[a] == 1 and values[b] == FREE:
            return [(b, 0)]
        if values[b] == 1 and values[a] == FREE:
            return [(a, 0)]
    return []


def propagate_in_place(store: ConstraintStore, partial: PartialAssignment) -> PropagationResult:
    """
    Unit propagation to a fixpoint, writing fixings into ``partial``.

    Returns the fixings made, the first conflicting constraint, or
    Quiescent when nothing could be derived.
    """
    values = partial.values
    queue = deque(range(len(store)))
    queued = [True] * len(store)
    made: List[Tuple[int, int]] = []
    while queue:
        index = queue.popleft()
        queued[index] = False
        outcome = _implied(store[index], values)
        if isinstance(outcome, Conflict):
            return outcome
        for node, value in outcome:
            if values[node] != FREE:
                continue
            if value == 0 and node == partial.root:
                return Conflict(store[index])
            values[node] = value
            made.append((node, value))
            for other in store.watching(node):
                if not queued[other]:
                    queued[other] = True
                    queue.append(other)
    if made:
        return Fixings(tuple(made))
    return Quiescent()


def propagate(store: ConstraintStore, partial: PartialAssignment) -> PropagationResult:
    """Like :func:`propagate_in_place` but leaves ``partial`` untouched."""
    return propagate_in_place(store, partial.copy())
