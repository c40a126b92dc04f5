"""
API endpoints for recorded solver runs.
"""

from typing import Any, Dict, List, Optional

import pandas as pd
from fastapi import APIRouter, Depends, HTTPException, Query
from sqlalchemy.orm import Session

from app.database import get_db
from app.mccs.separators import StrategyName
from app.models import SolveRun
from app.utils.analytics import BenchmarkAnalytics
from app.utils.runner import SolverName

router = APIRouter(prefix="/runs", tags=["runs"])


@router.get("/")
async def list_runs(
    solver: Optional[str] = Query(None, description="Filter by solver: exact, geodesic, maxcomp"),
    strategy: Optional[str] = Query(None, description="Filter by strategy name"),
    limit: int = Query(100, ge=1, le=1000, description="Maximum number of runs"),
    db: Session = Depends(get_db)
) -> List[Dict[str, Any]]:
    """Most recent runs first."""
    query = db.query(SolveRun)
    if solver is not None:
        try:
            query = query.filter(SolveRun.solver == SolverName(solver).value)
        except ValueError:
            raise HTTPException(status_code=400, detail=f"Invalid solver: {solver}")
    if strategy is not None:
        try:
            query = query.filter(SolveRun.strategy == StrategyName(strategy).value)
        except ValueError:
            raise HTTPException(status_code=400, detail=f"Invalid strategy: {strategy}")
    runs = query.order_by(SolveRun.id.desc()).limit(limit).all()
    return [run.to_dict() for run in runs]


@router.get("/summary")
async def runs_summary(db: Session = Depends(get_db)) -> List[Dict[str, Any]]:
    """
    Per solver, strategy and leaf-cut mode: run count, median search
    nodes, median constraints and mean objective.
    """
    try:
        frame = pd.DataFrame([run.to_dict() for run in db.query(SolveRun).all()])
        summary = BenchmarkAnalytics(frame).solver_summary()
        summary = summary.astype(object).where(pd.notna(summary), None)
        return summary.to_dict(orient="records")
    except Exception as e:
        raise HTTPException(status_code=500, detail=f"Internal server error: {str(e)}")


@router.get("/{run_id}")
async def get_run(run_id: int, db: Session = Depends(get_db)) -> Dict[str, Any]:
    run = db.get(SolveRun, run_id)
    if run is None:
        raise HTTPException(status_code=404, detail=f"Run {run_id} not found")
    return run.to_dict()
