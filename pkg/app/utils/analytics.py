"""
Analytics over benchmark rows: leaf-cut benefit, strategy agreement and
how often the geodesic heuristic reaches the exact optimum.
"""

from itertools import combinations
from typing import Any, Dict, List

import pandas as pd

from app.mccs.evaluation import objectives_match


class BenchmarkAnalytics:
    """Report calculator for a frame of bench rows (see ``benchmark.CSV_COLUMNS``)."""

    def __init__(self, frame: pd.DataFrame):
        self.frame = frame

    @property
    def exact(self) -> pd.DataFrame:
        return self.frame[self.frame["solver"] == "exact"]

    def leaf_cut_ratios(self) -> pd.DataFrame:
        """
        Median search nodes and constraints per strategy with and without
        singleton leaf cuts, and the with/without ratios.

        Returns:
            One row per strategy label; ratios are NaN where a side is
            missing or the denominator is zero
        """
        exact = self.exact.dropna(subset=["leaf_cuts"]).copy()
        columns = ["strategy", "nodes_with", "nodes_without", "nodes_ratio",
                   "constraints_with", "constraints_without", "constraints_ratio"]
        if exact.empty:
            return pd.DataFrame(columns=columns)

        exact["label"] = exact.apply(_strategy_label, axis=1)
        medians = (
            exact.groupby(["label", "leaf_cuts"])[["search_nodes", "constraints"]]
            .median()
            .unstack("leaf_cuts")
        )
        rows: List[Dict[str, Any]] = []
        for label, row in medians.iterrows():
            entry: Dict[str, Any] = {"strategy": label}
            for metric, prefix in (("search_nodes", "nodes"), ("constraints", "constraints")):
                with_cuts = row.get((metric, True))
                without = row.get((metric, False))
                entry[f"{prefix}_with"] = with_cuts
                entry[f"{prefix}_without"] = without
                entry[f"{prefix}_ratio"] = (
                    with_cuts / without if pd.notna(with_cuts) and pd.notna(without) and without else float("nan")
                )
            rows.append(entry)
        return pd.DataFrame(rows, columns=columns)

    def strategy_agreement(self) -> pd.DataFrame:
        """
        Per instance, the largest pairwise relative objective difference
        among exact runs (all strategies, k values and leaf-cut modes).
        """
        rows = []
        for instance, group in self.exact.groupby("instance", sort=True):
            values = group["objective"].astype(float).tolist()
            worst = 0.0
            for a, b in combinations(values, 2):
                scale = max(abs(a), abs(b))
                if scale > 0:
                    worst = max(worst, abs(a - b) / scale)
            rows.append({"instance": instance, "runs": len(values), "max_rel_diff": worst})
        return pd.DataFrame(rows, columns=["instance", "runs", "max_rel_diff"])

    def geodesic_match_fraction(self, rel_tol: float = 1e-4) -> float:
        """
        Fraction of instances whose geodesic objective matches the best
        exact objective within ``rel_tol``; NaN when no instance has both.
        """
        exact_best = self.exact.groupby("instance")["objective"].min()
        geodesic = self.frame[self.frame["solver"] == "geodesic"].groupby("instance")["objective"].min()
        shared = exact_best.index.intersection(geodesic.index)
        if len(shared) == 0:
            return float("nan")
        matches = sum(objectives_match(float(geodesic[i]), float(exact_best[i]), rel_tol) for i in shared)
        return matches / len(shared)

    def solver_summary(self) -> pd.DataFrame:
        """Run count, median nodes, median constraints and mean objective per solver configuration."""
        keys = ["solver", "strategy", "leaf_cuts"]
        if self.frame.empty:
            return pd.DataFrame(columns=keys + ["runs", "median_nodes", "median_constraints", "mean_objective"])
        summary = (
            self.frame.groupby(keys, dropna=False)
            .agg(
                runs=("objective", "size"),
                median_nodes=("search_nodes", "median"),
                median_constraints=("constraints", "median"),
                mean_objective=("objective", "mean"),
            )
            .reset_index()
        )
        return summary


def _strategy_label(row: pd.Series) -> str:
    k = row.get("k")
    return f"{row['strategy']}(k={int(k)})" if pd.notna(k) else str(row["strategy"])
