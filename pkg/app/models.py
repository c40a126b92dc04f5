"""
SQLAlchemy models for recorded solver runs.
"""

from typing import Any, Dict

from sqlalchemy import Boolean, Column, DateTime, Float, Index, Integer, String
from sqlalchemy.sql import func

from app.database import Base


class SolveRun(Base):
    """
    One solver run on one instance.

    Attributes:
        id: Primary key
        instance: Instance name
        solver: exact, geodesic or maxcomp
        strategy: Constraint generation strategy (exact runs only)
        k: Layer count of the k-strategies
        leaf_cuts: Whether singleton leaf cuts were installed
        rooted: Rooted formulation
        root: Root node used
        objective: Objective of the returned labeling
        status: Termination status
        wall_time_ms: Wall-clock time, when recorded
        search_nodes: Expanded search nodes
        constraints: Constraints generated by separation
        incumbent_updates: Incumbent improvements
        f1: F1 against ground truth
        precision: Precision against ground truth
        recall: Recall against ground truth
        created_at: Record creation timestamp
    """
    __tablename__ = "solve_runs"

    id = Column(Integer, primary_key=True, index=True)
    instance = Column(String(255), nullable=False, index=True)
    solver = Column(String(20), nullable=False, index=True)
    strategy = Column(String(20), nullable=True, index=True)
    k = Column(Integer, nullable=True)
    leaf_cuts = Column(Boolean, nullable=True)
    rooted = Column(Boolean, default=True, nullable=False)
    root = Column(Integer, nullable=True)
    objective = Column(Float, nullable=False)
    status = Column(String(20), nullable=False)
    wall_time_ms = Column(Float, nullable=True)
    search_nodes = Column(Integer, default=0, nullable=False)
    constraints = Column(Integer, default=0, nullable=False)
    incumbent_updates = Column(Integer, default=0, nullable=False)
    f1 = Column(Float, nullable=True)
    precision = Column(Float, nullable=True)
    recall = Column(Float, nullable=True)
    created_at = Column(DateTime(timezone=True), server_default=func.now(), nullable=False)

    __table_args__ = (
        Index('idx_solve_runs_solver_strategy', 'solver', 'strategy'),
        Index('idx_solve_runs_instance_solver', 'instance', 'solver'),
    )

    def __repr__(self) -> str:
        return f"<SolveRun(id={self.id}, instance={self.instance}, solver={self.solver}, objective={self.objective})>"

    def to_dict(self) -> Dict[str, Any]:
        return {
            "id": self.id,
            "instance": self.instance,
            "solver": self.solver,
            "strategy": self.strategy,
            "k": self.k,
            "leaf_cuts": self.leaf_cuts,
            "rooted": self.rooted,
            "root": self.root,
            "objective": self.objective,
            "status": self.status,
            "wall_time_ms": self.wall_time_ms,
            "search_nodes": self.search_nodes,
            "constraints": self.constraints,
            "incumbent_updates": self.incumbent_updates,
            "f1": self.f1,
            "precision": self.precision,
            "recall": self.recall,
            "created_at": self.created_at.isoformat() if self.created_at else None,
        }
