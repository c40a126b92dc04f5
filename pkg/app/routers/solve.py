"""
API endpoint for solving one instance.
"""

import logging
from typing import Any, Dict, List, Optional, Tuple

from fastapi import APIRouter, Depends, HTTPException
from pydantic import BaseModel, Field, ValidationError, model_validator
from sqlalchemy.orm import Session

from app.config import settings
from app.database import get_db
from app.mccs.errors import MCCSError
from app.mccs.exact import SolverConfig
from app.mccs.graph import Assignment, build_grid, build_sparse
from app.mccs.separators import StrategyName
from app.mccs.weights import probabilities_to_weights, select_root
from app.models import SolveRun
from app.utils.data_loader import Instance
from app.utils.runner import SolverName, run_solver, stats_record

logger = logging.getLogger(__name__)

router = APIRouter(prefix="/solve", tags=["solve"])


class SolveRequest(BaseModel):
    """
    An instance plus solver options.

    Either ``extents`` and ``probabilities`` (grid) or ``n_nodes``,
    ``edges`` and ``weights`` (sparse) must be given.
    """
    name: str = Field(default="api", max_length=255, description="Instance label for the run record")
    extents: Optional[List[int]] = Field(default=None, description="Grid extents")
    probabilities: Optional[List[float]] = Field(default=None, description="Row-major probabilities")
    n_nodes: Optional[int] = Field(default=None, ge=1, description="Sparse graph node count")
    edges: List[Tuple[int, int]] = Field(default_factory=list, description="Sparse graph edges")
    weights: Optional[List[float]] = Field(default=None, description="Sparse graph node weights")

    solver: SolverName = Field(default=SolverName.EXACT)
    strategy: StrategyName = Field(default=StrategyName.NEAREST)
    k: Optional[int] = Field(default=None, ge=1)
    gap: Optional[float] = Field(default=None, ge=0.0)
    time_limit: Optional[float] = Field(default=None, gt=0.0)
    node_limit: Optional[int] = Field(default=None, gt=0)
    root: Optional[int] = Field(default=None, ge=0)
    unrooted: bool = False
    leaf_cuts: bool = True
    component_leaf_cuts: bool = False
    ground_truth: Optional[List[int]] = Field(default=None, description="0/1 reference labels")

    @model_validator(mode="after")
    def _one_instance_kind(self) -> "SolveRequest":
        grid = self.extents is not None or self.probabilities is not None
        sparse = self.n_nodes is not None or self.weights is not None
        if grid == sparse:
            raise ValueError("give either extents/probabilities or n_nodes/edges/weights")
        if grid and (self.extents is None or self.probabilities is None):
            raise ValueError("grid instances need both extents and probabilities")
        if sparse and (self.n_nodes is None or self.weights is None):
            raise ValueError("sparse instances need n_nodes and weights")
        return self

    def to_instance(self) -> Instance:
        if self.extents is not None:
            graph = build_grid(self.extents)
            weights = probabilities_to_weights(self.probabilities, settings.probability_eps)
        else:
            graph = build_sparse(self.n_nodes, self.edges)
            weights = self.weights
        truth = Assignment(tuple(self.ground_truth)) if self.ground_truth is not None else None
        instance = Instance(graph=graph, weights=weights, ground_truth=truth, name=self.name)
        if not self.unrooted:
            instance.root = self.root if self.root is not None else select_root(graph, instance.weights)
        return instance

    def to_config(self) -> SolverConfig:
        return SolverConfig.from_settings(
            strategy=self.strategy,
            k=self.k,
            rel_gap=self.gap,
            time_limit=self.time_limit,
            node_limit=self.node_limit,
            rooted=not self.unrooted,
            root=self.root,
            use_singleton_leaf_cuts=self.leaf_cuts,
            use_component_leaf_cuts=self.component_leaf_cuts,
        )


@router.post("/")
def solve_instance(request: SolveRequest, db: Session = Depends(get_db)) -> Dict[str, Any]:
    """
    Solve an instance, store the run and return its stats record.

    Args:
        request: Instance and solver options
        db: Database session

    Returns:
        Stats record with the active node list and the stored run id
    """
    try:
        instance = request.to_instance()
        config = request.to_config()
        result = run_solver(instance, request.solver, config)
        record = stats_record(instance, result, request.solver, config)

        run = SolveRun(
            instance=request.name,
            solver=record["solver"],
            strategy=record["strategy"],
            k=record["k"],
            leaf_cuts=request.leaf_cuts if request.solver is SolverName.EXACT else None,
            rooted=config.rooted,
            root=record["root"],
            objective=record["objective"],
            status=record["status"],
            wall_time_ms=record["wall_time_ms"],
            search_nodes=record["search_nodes_expanded"],
            constraints=record["constraints_generated"],
            incumbent_updates=record["incumbent_updates"],
            f1=record.get("f1"),
            precision=record.get("precision"),
            recall=record.get("recall"),
        )
        db.add(run)
        db.commit()
        db.refresh(run)

        return {**record, "active": list(result.assignment.active), "run_id": run.id}

    except (MCCSError, ValidationError) as e:
        raise HTTPException(status_code=400, detail=str(e))
    except HTTPException:
        raise
    except Exception as e:
        logger.exception("solve failed")
        raise HTTPException(status_code=500, detail=f"Internal server error: {str(e)}")
