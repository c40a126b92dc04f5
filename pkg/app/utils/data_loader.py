"""
Instance and solution file I/O, plus synthetic instance generation.

Grid Probability Format::

    grid <d> <n1> ... <nd>
    <prod(n) whitespace-separated floats, row-major>

Sparse graph format, one record per line::

    n <count>
    w <i> <float>
    e <i> <j>

Sparse solutions are written as ``nodes <count>`` followed by one active
index per line. Blank lines and ``#`` comments are ignored everywhere.
"""

import json
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, Iterator, List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.ndimage import uniform_filter
from scipy.special import expit

from app.config import settings
from app.mccs.errors import GraphError, InputError, InstanceFormatError
from app.mccs.graph import Assignment, Graph, build_grid, build_sparse
from app.mccs.weights import NodeWeights, as_weights, probabilities_to_weights, select_root

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


@dataclass
class Instance:
    """
    A solver input.

    Attributes:
        graph: Graph to solve on
        weights: Node costs
        root: Root node, if any
        ground_truth: Reference labeling for scoring
        probabilities: Probability map the weights came from (grid instances)
        name: Label used in reports
    """
    graph: Graph
    weights: NodeWeights
    root: Optional[int] = None
    ground_truth: Optional[Assignment] = None
    probabilities: Optional[np.ndarray] = None
    name: str = "instance"

    def __post_init__(self) -> None:
        self.weights = as_weights(self.weights, self.graph.n_nodes)
        if self.root is not None and not 0 <= self.root < self.graph.n_nodes:
            raise InputError(f"root {self.root} out of range for {self.graph.n_nodes} nodes")
        if self.ground_truth is not None and len(self.ground_truth) != self.graph.n_nodes:
            raise InputError("ground truth length does not match the graph")


def _records(path: PathLike) -> Iterator[Tuple[int, List[str]]]:
    """Yield ``(line_number, tokens)`` for every non-blank, non-comment line."""
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InstanceFormatError(f"cannot read file: {exc.strerror}", str(path)) from exc
    for number, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if line:
            yield number, line.split()


def _parse_int(token: str, path: PathLike, line: int) -> int:
    try:
        return int(token)
    except ValueError:
        raise InstanceFormatError(f"expected an integer, got {token!r}", str(path), line) from None


def read_grid_values(path: PathLike) -> Tuple[Tuple[int, ...], np.ndarray]:
    """Parse a Grid Probability Format file into extents and a flat value array."""
    records = list(_records(path))
    if not records:
        raise InstanceFormatError("empty file", str(path))
    line, header = records[0]
    if header[0] != "grid" or len(header) < 3:
        raise InstanceFormatError("expected header 'grid <d> <n1> ... <nd>'", str(path), line)
    d = _parse_int(header[1], path, line)
    extents = tuple(_parse_int(token, path, line) for token in header[2:])
    if len(extents) != d:
        raise InstanceFormatError(f"header declares {d} axes but lists {len(extents)} extents", str(path), line)
    if any(e < 1 for e in extents):
        raise InstanceFormatError(f"extents must be positive, got {extents}", str(path), line)

    tokens = [token for _, toks in records[1:] for token in toks]
    try:
        values = np.array(tokens, dtype=np.float64)
    except ValueError:
        raise InstanceFormatError("non-numeric value in grid body", str(path)) from None
    expected = int(np.prod(extents))
    if values.size != expected:
        raise InstanceFormatError(f"expected {expected} values, found {values.size}", str(path))
    return extents, values


def read_grid_probabilities(
    path: PathLike,
    root: Optional[int] = None,
    eps: Optional[float] = None,
) -> Instance:
    """
    Load a probability map as a grid instance.

    Weights are the clamped negative log-odds; the root defaults to
    :func:`select_root`.
    """
    extents, values = read_grid_values(path)
    if np.isnan(values).any() or (values < 0).any() or (values > 1).any():
        raise InstanceFormatError("probability outside [0, 1]", str(path))
    try:
        graph = build_grid(extents)
    except GraphError as exc:
        raise InstanceFormatError(str(exc), str(path)) from exc
    weights = probabilities_to_weights(values, eps if eps is not None else settings.probability_eps)
    root = root if root is not None else select_root(graph, weights)
    logger.debug("loaded grid %s from %s", extents, path)
    return Instance(graph=graph, weights=weights, root=root, probabilities=values, name=Path(path).stem)


def read_sparse_graph(path: PathLike, root: Optional[int] = None) -> Instance:
    """Load a sparse graph with explicit node weights."""
    n_nodes: Optional[int] = None
    weights: Dict[int, float] = {}
    edges: List[Tuple[int, int]] = []
    for line, tokens in _records(path):
        tag = tokens[0]
        if tag == "n" and len(tokens) == 2:
            if n_nodes is not None:
                raise InstanceFormatError("node count given twice", str(path), line)
            n_nodes = _parse_int(tokens[1], path, line)
            if n_nodes < 1:
                raise InstanceFormatError("node count must be positive", str(path), line)
        elif tag == "w" and len(tokens) == 3:
            i = _parse_int(tokens[1], path, line)
            if i in weights:
                raise InstanceFormatError(f"weight for node {i} given twice", str(path), line)
            try:
                weights[i] = float(tokens[2])
            except ValueError:
                raise InstanceFormatError(f"bad weight {tokens[2]!r}", str(path), line) from None
        elif tag == "e" and len(tokens) == 3:
            edges.append((_parse_int(tokens[1], path, line), _parse_int(tokens[2], path, line)))
        else:
            raise InstanceFormatError(f"unrecognised record {' '.join(tokens)!r}", str(path), line)

    if n_nodes is None:
        raise InstanceFormatError("missing 'n <count>' record", str(path))
    out_of_range = sorted(i for i in weights if not 0 <= i < n_nodes)
    if out_of_range:
        raise InstanceFormatError(f"weights for unknown nodes {out_of_range}", str(path))
    missing = [i for i in range(n_nodes) if i not in weights]
    if missing:
        raise InstanceFormatError(f"missing weights for nodes {missing[:10]}", str(path))
    try:
        graph = build_sparse(n_nodes, edges)
        w = as_weights([weights[i] for i in range(n_nodes)], n_nodes)
    except (GraphError, InputError) as exc:
        raise InstanceFormatError(str(exc), str(path)) from exc
    root = root if root is not None else select_root(graph, w)
    return Instance(graph=graph, weights=w, root=root, name=Path(path).stem)


def read_instance(path: PathLike, root: Optional[int] = None) -> Instance:
    """Dispatch on the first record: ``grid`` files or sparse graphs."""
    first = next(_records(path), None)
    if first is None:
        raise InstanceFormatError("empty file", str(path))
    if first[1][0] == "grid":
        return read_grid_probabilities(path, root=root)
    return read_sparse_graph(path, root=root)


def read_mask(path: PathLike, n_nodes: Optional[int] = None) -> Assignment:
    """Read a solution or ground-truth labeling in either output format."""
    first = next(_records(path), None)
    if first is None:
        raise InstanceFormatError("empty file", str(path))
    if first[1][0] == "grid":
        _, values = read_grid_values(path)
        if not np.isin(values, (0.0, 1.0)).all():
            raise InstanceFormatError("mask values must be 0 or 1", str(path))
        labels = tuple(int(v) for v in values)
    else:
        records = list(_records(path))
        line, header = records[0]
        if header[0] != "nodes" or len(header) != 2:
            raise InstanceFormatError("expected header 'nodes <count>'", str(path), line)
        count = _parse_int(header[1], path, line)
        active = [_parse_int(toks[0], path, ln) for ln, toks in records[1:]]
        try:
            labels = Assignment.from_nodes(count, active).labels
        except InputError as exc:
            raise InstanceFormatError(str(exc), str(path)) from exc
    if n_nodes is not None and len(labels) != n_nodes:
        raise InstanceFormatError(f"mask has {len(labels)} labels, graph has {n_nodes} nodes", str(path))
    return Assignment(labels)


def _grid_lines(extents: Sequence[int], tokens: Sequence[str]) -> List[str]:
    width = extents[-1]
    lines = [f"grid {len(extents)} " + " ".join(str(e) for e in extents)]
    lines.extend(" ".join(tokens[i:i + width]) for i in range(0, len(tokens), width))
    return lines


def write_grid_probabilities(path: PathLike, extents: Sequence[int], probabilities: Sequence[float]) -> None:
    """Write a probability map with 17 significant digits."""
    tokens = [format(float(p), ".17g") for p in np.asarray(probabilities).ravel()]
    Path(path).write_text("\n".join(_grid_lines(extents, tokens)) + "\n")


def write_solution(path: PathLike, x: Assignment, graph: Optional[Graph] = None) -> None:
    """Grid instances get a 0/1 grid mask, everything else an active node list."""
    if graph is not None and graph.grid_meta is not None:
        tokens = [str(v) for v in x.labels]
        text = "\n".join(_grid_lines(graph.grid_meta.extents, tokens))
    else:
        text = "\n".join([f"nodes {len(x)}"] + [str(i) for i in x.active])
    Path(path).write_text(text + "\n")


def write_stats(path: PathLike, record: Dict[str, Any]) -> None:
    Path(path).write_text(json.dumps(record, indent=2, sort_keys=False) + "\n")


def gen_random(extents: Sequence[int], radius: int, seed: int) -> Instance:
    """
    Synthetic probability map: uniform noise smoothed ``radius`` times with
    a 3-wide box filter, standardized and squashed through the logistic
    function into (0, 1).
    """
    if radius < 0:
        raise InputError(f"smoothing radius must be nonnegative, got {radius}")
    graph = build_grid(extents)
    rng = np.random.default_rng(seed)
    field = rng.random(tuple(graph.grid_meta.extents))
    for _ in range(radius):
        field = uniform_filter(field, size=3, mode="nearest")
    spread = field.std()
    z = (field - field.mean()) / spread if spread > 0 else np.zeros_like(field)
    probabilities = expit(z).ravel()
    weights = probabilities_to_weights(probabilities, settings.probability_eps)
    truth = Assignment(tuple(int(v) for v in (probabilities > 0.5)))
    name = "grid" + "x".join(str(e) for e in extents) + f"_r{radius}_s{seed}"
    return Instance(
        graph=graph,
        weights=weights,
        root=select_root(graph, weights),
        ground_truth=truth,
        probabilities=probabilities,
        name=name,
    )
