"""create solve_runs

Revision ID: 0001
Revises:
Create Date: 2026-10-17 00:00:00
"""

import sqlalchemy as sa
from alembic import op

revision = "0001"
down_revision = None
branch_labels = None
depends_on = None


def upgrade() -> None:
    op.create_table(
        "solve_runs",
        sa.Column("id", sa.Integer(), primary_key=True),
        sa.Column("instance", sa.String(length=255), nullable=False),
        sa.Column("solver", sa.String(length=20), nullable=False),
        sa.Column("strategy", sa.String(length=20), nullable=True),
        sa.Column("k", sa.Integer(), nullable=True),
        sa.Column("leaf_cuts", sa.Boolean(), nullable=True),
        sa.Column("rooted", sa.Boolean(), nullable=False),
        sa.Column("root", sa.Integer(), nullable=True),
        sa.Column("objective", sa.Float(), nullable=False),
        sa.Column("status", sa.String(length=20), nullable=False),
        sa.Column("wall_time_ms", sa.Float(), nullable=True),
        sa.Column("search_nodes", sa.Integer(), nullable=False),
        sa.Column("constraints", sa.Integer(), nullable=False),
        sa.Column("incumbent_updates", sa.Integer(), nullable=False),
        sa.Column("f1", sa.Float(), nullable=True),
        sa.Column("precision", sa.Float(), nullable=True),
        sa.Column("recall", sa.Float(), nullable=True),
        sa.Column("created_at", sa.DateTime(timezone=True), server_default=sa.func.now(), nullable=False),
    )
    op.create_index("ix_solve_runs_id", "solve_runs", ["id"])
    op.create_index("ix_solve_runs_instance", "solve_runs", ["instance"])
    op.create_index("ix_solve_runs_solver", "solve_runs", ["solver"])
    op.create_index("ix_solve_runs_strategy", "solve_runs", ["strategy"])
    op.create_index("idx_solve_runs_solver_strategy", "solve_runs", ["solver", "strategy"])
    op.create_index("idx_solve_runs_instance_solver", "solve_runs", ["instance", "solver"])


def downgrade() -> None:
    op.drop_index("idx_solve_runs_instance_solver", table_name="solve_runs")
    op.drop_index("idx_solve_runs_solver_strategy", table_name="solve_runs")
    op.drop_index("ix_solve_runs_strategy", table_name="solve_runs")
    op.drop_index("ix_solve_runs_solver", table_name="solve_runs")
    op.drop_index("ix_solve_runs_instance", table_name="solve_runs")
    op.drop_index("ix_solve_runs_id", table_name="solve_runs")
    op.drop_table("solve_runs")
