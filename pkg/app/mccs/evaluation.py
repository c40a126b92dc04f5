"""
Maxcomp baseline and segmentation / objective metrics.
"""

import math
from dataclasses import asdict, dataclass
from typing import Any, Dict

import numpy as np

from app.mccs.errors import InputError
from app.mccs.exact import objective_of
from app.mccs.graph import Assignment, Graph, Labels, connected_components
from app.mccs.weights import NodeWeights, as_weights, pick_component


@dataclass(frozen=True)
class Scores:
    """Overlap scores of a predicted mask against ground truth."""
    precision: float
    recall: float
    f1: float
    true_pos: int
    false_pos: int
    false_neg: int

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


def _as_array(x: Labels) -> np.ndarray:
    return np.asarray(getattr(x, "labels", x), dtype=bool)


def maxcomp(graph: Graph, weights: NodeWeights) -> Assignment:
    """
    Largest connected component of the unconstrained solution ``w < 0``.

    Ties go to the lower total weight, then to the smaller first member.
    """
    w = as_weights(weights, graph.n_nodes).tolist()
    components = connected_components(graph, [1 if wi < 0 else 0 for wi in w])
    if not components:
        return Assignment.empty(graph.n_nodes)
    return Assignment.from_nodes(graph.n_nodes, pick_component(components, w))


def score(pred: Labels, truth: Labels) -> Scores:
    """
    Precision, recall and F1 of ``pred`` against ``truth``.

    An empty prediction has precision 1 only when the truth is empty too;
    recall follows the same convention for an empty truth.
    """
    p, t = _as_array(pred), _as_array(truth)
    if p.shape != t.shape:
        raise InputError(f"prediction has {p.size} labels, truth has {t.size}")
    tp = int(np.count_nonzero(p & t))
    fp = int(np.count_nonzero(p & ~t))
    fn = int(np.count_nonzero(~p & t))

    if tp + fp > 0:
        precision = tp / (tp + fp)
    else:
        precision = 1.0 if tp + fn == 0 else 0.0
    if tp + fn > 0:
        recall = tp / (tp + fn)
    else:
        recall = 1.0 if tp + fp == 0 else 0.0
    f1 = 2 * precision * recall / (precision + recall) if precision + recall > 0 else 0.0
    return Scores(precision=precision, recall=recall, f1=f1, true_pos=tp, false_pos=fp, false_neg=fn)


def objective(x: Labels, weights: NodeWeights) -> float:
    """Total weight of the active nodes."""
    labels = getattr(x, "labels", x)
    w = np.asarray(weights, dtype=np.float64).ravel()
    if len(labels) != w.shape[0]:
        raise InputError(f"labeling has {len(labels)} entries, weights have {w.shape[0]}")
    return objective_of(labels, w.tolist())


def objectives_match(a: float, b: float, rel_tol: float = 1e-4) -> bool:
    """``|a - b| <= rel_tol * max(|a|, |b|)``; two zeros match."""
    if rel_tol < 0:
        raise InputError(f"relative tolerance must be nonnegative, got {rel_tol}")
    return math.fabs(a - b) <= rel_tol * max(math.fabs(a), math.fabs(b))
