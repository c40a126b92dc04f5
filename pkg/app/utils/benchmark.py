"""
Strategy x instance benchmark matrix.

Every case regenerates its instance from ``(extents, radius, seed)``, so
cases can run in worker processes without shipping graphs around and
rows do not depend on execution order.
"""

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from itertools import product
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple, Union

import pandas as pd
from sqlalchemy.orm import Session

from app.mccs.exact import SolverConfig
from app.mccs.separators import StrategyKind, StrategyName
from app.models import SolveRun
from app.utils.data_loader import gen_random
from app.utils.runner import SolverName, run_solver, stats_record

logger = logging.getLogger(__name__)

CSV_COLUMNS = [
    "instance", "solver", "strategy", "k", "leaf_cuts", "objective", "status",
    "wall_time_ms", "search_nodes", "constraints", "f1", "precision", "recall",
]
SORT_KEYS = ["instance", "solver", "strategy", "k", "leaf_cuts"]


@dataclass(frozen=True)
class BenchCase:
    """One cell of the matrix."""
    extents: Tuple[int, ...]
    radius: int
    seed: int
    solver: SolverName
    strategy: Optional[StrategyName] = None
    k: Optional[int] = None
    leaf_cuts: Optional[bool] = None
    rel_gap: float = 1e-4
    time_limit: Optional[float] = None
    timings: bool = False

    def config(self) -> SolverConfig:
        overrides: Dict[str, Any] = {"rel_gap": self.rel_gap, "time_limit": self.time_limit}
        if self.strategy is not None:
            overrides["strategy"] = self.strategy
        if self.k is not None:
            overrides["k"] = self.k
        if self.leaf_cuts is not None:
            overrides["use_singleton_leaf_cuts"] = self.leaf_cuts
        return SolverConfig.from_settings(**overrides)


def build_cases(
    extents: Sequence[int],
    n_instances: int,
    seed: int,
    radius: int = 2,
    solvers: Sequence[Union[str, SolverName]] = (SolverName.EXACT,),
    strategies: Sequence[Union[str, StrategyName]] = tuple(StrategyName),
    ks: Sequence[int] = (4,),
    leaf_cut_modes: Sequence[bool] = (True,),
    rel_gap: float = 1e-4,
    time_limit: Optional[float] = None,
    timings: bool = False,
) -> List[BenchCase]:
    """
    Expand the matrix. Instance ``i`` uses seed ``seed + i``; the ``ks``
    only multiply the k-strategies.
    """
    cases: List[BenchCase] = []
    common = dict(extents=tuple(extents), radius=radius, rel_gap=rel_gap, time_limit=time_limit, timings=timings)
    for i in range(n_instances):
        for solver in map(SolverName, solvers):
            if solver is not SolverName.EXACT:
                cases.append(BenchCase(seed=seed + i, solver=solver, **common))
                continue
            for strategy in map(StrategyName, strategies):
                layer_counts = ks if StrategyKind(strategy).parametric else (None,)
                for k, leaf_cuts in product(layer_counts, leaf_cut_modes):
                    cases.append(BenchCase(
                        seed=seed + i, solver=solver, strategy=strategy, k=k, leaf_cuts=leaf_cuts, **common
                    ))
    return cases


def run_case(case: BenchCase) -> Dict[str, Any]:
    """Run one case and return its row, with the extra fields persisted runs carry."""
    instance = gen_random(case.extents, case.radius, case.seed)
    config = case.config()
    result = run_solver(instance, case.solver, config)
    record = stats_record(instance, result, case.solver, config, include_timing=case.timings)
    exact = case.solver is SolverName.EXACT
    return {
        "instance": instance.name,
        "solver": case.solver.value,
        "strategy": record["strategy"],
        "k": record["k"],
        "leaf_cuts": case.leaf_cuts if exact else None,
        "objective": result.objective,
        "status": record["status"],
        "wall_time_ms": record["wall_time_ms"],
        "search_nodes": record["search_nodes_expanded"],
        "constraints": record["constraints_generated"],
        "f1": record.get("f1"),
        "precision": record.get("precision"),
        "recall": record.get("recall"),
        "rooted": config.rooted,
        "root": result.root,
        "incumbent_updates": record["incumbent_updates"],
    }


def rows_to_frame(rows: Iterable[Dict[str, Any]]) -> pd.DataFrame:
    """Rows as a frame sorted on the matrix keys, with nullable integer columns."""
    frame = pd.DataFrame(list(rows))
    if frame.empty:
        return pd.DataFrame(columns=CSV_COLUMNS)
    frame = frame.astype({
        "k": "Int64",
        "leaf_cuts": "boolean",
        "search_nodes": "Int64",
        "constraints": "Int64",
        "wall_time_ms": "float64",
        "f1": "float64",
        "precision": "float64",
        "recall": "float64",
    })
    return frame.sort_values(SORT_KEYS, kind="mergesort", na_position="first").reset_index(drop=True)


def run_bench(cases: Sequence[BenchCase], workers: int = 1) -> pd.DataFrame:
    """Run every case, ``workers`` at a time, and return the sorted rows."""
    logger.info("bench: %d cases on %d worker(s)", len(cases), workers)
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(run_case, cases))
    else:
        rows = [run_case(case) for case in cases]
    return rows_to_frame(rows)


def write_csv(frame: pd.DataFrame, path: Union[str, Path]) -> None:
    frame.to_csv(path, columns=CSV_COLUMNS, index=False, lineterminator="\n")


def record_runs(db: Session, frame: pd.DataFrame) -> int:
    """Store every row as a :class:`SolveRun`; returns the number stored."""
    count = 0
    for row in frame.to_dict(orient="records"):
        values = {key: (None if pd.isna(value) else value) for key, value in row.items()}
        db.add(SolveRun(
            instance=values["instance"],
            solver=values["solver"],
            strategy=values.get("strategy"),
            k=int(values["k"]) if values.get("k") is not None else None,
            leaf_cuts=bool(values["leaf_cuts"]) if values.get("leaf_cuts") is not None else None,
            rooted=bool(values.get("rooted", True)),
            root=int(values["root"]) if values.get("root") is not None else None,
            objective=float(values["objective"]),
            status=values["status"],
            wall_time_ms=values.get("wall_time_ms"),
            search_nodes=int(values.get("search_nodes") or 0),
            constraints=int(values.get("constraints") or 0),
            incumbent_updates=int(values.get("incumbent_updates") or 0),
            f1=values.get("f1"),
            precision=values.get("precision"),
            recall=values.get("recall"),
        ))
        count += 1
    db.commit()
    logger.info("recorded %d runs", count)
    return count
