"""
Single solver runs and their stats records, shared by the CLI, the bench
harness and the HTTP API.
"""

import logging
import time
from enum import Enum
from typing import Any, Dict, Optional

from app.mccs.evaluation import maxcomp, objective, score
from app.mccs.exact import SolveResult, SolverConfig, SolveStats, SolveStatus, solve_exact
from app.mccs.geodesic import geodesic_heuristic
from app.utils.data_loader import Instance

logger = logging.getLogger(__name__)


class SolverName(str, Enum):
    EXACT = "exact"
    GEODESIC = "geodesic"
    MAXCOMP = "maxcomp"


def run_solver(instance: Instance, solver: SolverName, config: Optional[SolverConfig] = None) -> SolveResult:
    """
    Run one solver on an instance.

    The exact solver uses ``config``; the root of the instance is passed on
    unless the config is unrooted or names its own root. The geodesic
    heuristic always needs a root and falls back to the instance root.
    """
    solver = SolverName(solver)
    config = config or SolverConfig.from_settings()

    if solver is SolverName.EXACT:
        if config.rooted and config.root is None and instance.root is not None:
            config = config.model_copy(update={"root": instance.root})
        return solve_exact(instance.graph, instance.weights, config)

    if solver is SolverName.GEODESIC:
        root = config.root if config.root is not None else instance.root
        return geodesic_heuristic(instance.graph, instance.weights, root)

    started = time.perf_counter()
    x = maxcomp(instance.graph, instance.weights)
    value = objective(x, instance.weights)
    return SolveResult(
        assignment=x,
        objective=value,
        status=SolveStatus.OPTIMAL,
        stats=SolveStats(wall_time=time.perf_counter() - started),
        bound=value,
        root=None,
    )


def stats_record(
    instance: Instance,
    result: SolveResult,
    solver: SolverName,
    config: Optional[SolverConfig] = None,
    include_timing: bool = True,
) -> Dict[str, Any]:
    """
    Stats JSON object of a run.

    ``root_in_maxcomp`` tells whether the Maxcomp component contains the
    run root, or the instance root for rootless solvers (null when neither
    exists). Scores are added when the instance carries ground truth.
    """
    solver = SolverName(solver)
    exact = solver is SolverName.EXACT
    root = result.root if result.root is not None else instance.root
    baseline = maxcomp(instance.graph, instance.weights)
    record: Dict[str, Any] = {
        "solver": solver.value,
        "strategy": config.strategy.value if exact and config else None,
        "k": config.k if exact and config and config.strategy_kind.parametric else None,
        "objective": result.objective,
        "status": result.status.value,
        "wall_time_ms": round(result.stats.wall_time * 1000.0, 3) if include_timing else None,
        "search_nodes_expanded": result.stats.search_nodes_expanded,
        "constraints_generated": result.stats.constraints_generated,
        "incumbent_updates": result.stats.incumbent_updates,
        "separation_rounds": result.stats.separation_rounds,
        "root": root,
        "root_in_maxcomp": bool(baseline[root]) if root is not None else None,
    }
    if instance.ground_truth is not None:
        scores = score(result.assignment, instance.ground_truth)
        record.update(f1=scores.f1, precision=scores.precision, recall=scores.recall)
    return record
