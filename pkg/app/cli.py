"""
Command line interface: ``solve``, ``gen``, ``eval`` and ``bench``.

Machine-readable output (stats JSON, scores, CSV) goes to stdout or the
requested files; logs go to stderr. Usage and input errors exit with 2.
"""

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import List, Optional

from pydantic import ValidationError

from app.config import settings
from app.database import SessionLocal, init_db, make_engine
from app.logging_config import configure_logging
from app.mccs.errors import InputError, MCCSError
from app.mccs.evaluation import objective, score
from app.mccs.exact import SolverConfig
from app.mccs.separators import StrategyName
from app.utils.analytics import BenchmarkAnalytics
from app.utils.benchmark import build_cases, record_runs, run_bench, write_csv
from app.utils.data_loader import (
    gen_random,
    read_instance,
    read_mask,
    write_grid_probabilities,
    write_solution,
    write_stats,
)
from app.utils.runner import SolverName, run_solver, stats_record

logger = logging.getLogger(__name__)

STRATEGIES = [s.value for s in StrategyName]
SOLVERS = [s.value for s in SolverName]


def _root_arg(value: str) -> Optional[int]:
    if value == "auto":
        return None
    try:
        root = int(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected 'auto' or a node index, got {value!r}") from None
    if root < 0:
        raise argparse.ArgumentTypeError(f"root must be nonnegative, got {root}")
    return root


def _positive_int(value: str) -> int:
    try:
        number = int(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {value!r}") from None
    if number < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {number}")
    return number


def _add_solver_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--strategy", choices=STRATEGIES, default=StrategyName.NEAREST.value,
                        help="Constraint generation strategy of the exact solver")
    parser.add_argument("--k", type=_positive_int, default=None,
                        help=f"Layer count of k-nearest / k-interleave (default {settings.default_k})")
    parser.add_argument("--gap", type=float, default=None,
                        help=f"Relative optimality gap (default {settings.default_rel_gap:g})")
    parser.add_argument("--time-limit", type=float, default=None, help="Time limit in seconds")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mccs", description="Minimum cost connected subgraph solvers")
    parser.add_argument("--log-level", default=None, help="Logging level (default from settings)")
    sub = parser.add_subparsers(dest="command", required=True)

    solve = sub.add_parser("solve", help="Solve one instance and print its stats record")
    solve.add_argument("instance", help="Grid Probability Format or sparse graph file")
    solve.add_argument("--solver", choices=SOLVERS, default=SolverName.EXACT.value)
    _add_solver_options(solve)
    solve.add_argument("--node-limit", type=_positive_int, default=None, help="Search node limit")
    solve.add_argument("--root", type=_root_arg, default=None, metavar="{auto,INDEX}", help="Root node")
    solve.add_argument("--no-leaf-cuts", action="store_true", help="Skip the singleton leaf cuts")
    solve.add_argument("--component-leaf-cuts", action="store_true", help="Separate leaf cuts for larger sets")
    solve.add_argument("--unrooted", action="store_true", help="Pairwise formulation without a root")
    solve.add_argument("--gt", default=None, help="Ground truth mask for precision / recall / F1")
    solve.add_argument("--out", default=None, help="Solution file; the stats record goes next to it")

    gen = sub.add_parser("gen", help="Write a synthetic probability map")
    gen.add_argument("--extents", type=_positive_int, nargs="+", required=True)
    gen.add_argument("--radius", type=int, default=2, help="Box filter passes")
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--out", required=True)
    gen.add_argument("--truth", default=None, help="Also write the thresholded (p > 0.5) mask")

    ev = sub.add_parser("eval", help="Score a predicted mask against ground truth")
    ev.add_argument("--pred", required=True)
    ev.add_argument("--truth", required=True)
    ev.add_argument("--instance", default=None, help="Also report the objective on this instance")

    bench = sub.add_parser("bench", help="Run a strategy x instance matrix and write CSV rows")
    bench.add_argument("--extents", type=_positive_int, nargs="+", default=[8, 8])
    bench.add_argument("--instances", type=_positive_int, default=25)
    bench.add_argument("--radius", type=int, default=2)
    bench.add_argument("--seed", type=int, default=0)
    bench.add_argument("--solvers", choices=SOLVERS, nargs="+", default=[SolverName.EXACT.value])
    bench.add_argument("--strategies", choices=STRATEGIES, nargs="+", default=STRATEGIES)
    bench.add_argument("--k", type=_positive_int, nargs="+", default=None)
    bench.add_argument("--gap", type=float, default=None)
    bench.add_argument("--time-limit", type=float, default=None)
    cuts = bench.add_mutually_exclusive_group()
    cuts.add_argument("--no-leaf-cuts", action="store_true")
    cuts.add_argument("--with-and-without-leaf-cuts", action="store_true")
    bench.add_argument("--workers", type=_positive_int, default=None)
    bench.add_argument("--timings", action="store_true", help="Fill wall_time_ms (makes output nondeterministic)")
    bench.add_argument("--db", default=None, help="Also store rows in this database")
    bench.add_argument("--report", action="store_true", help="Print analytics tables to stderr")
    bench.add_argument("--out", default=None, help="CSV path (default stdout)")
    return parser


def _cmd_solve(args: argparse.Namespace) -> int:
    if args.unrooted and args.root is not None:
        raise InputError("--root cannot be combined with --unrooted")
    instance = read_instance(args.instance, root=args.root)
    if args.gt:
        instance.ground_truth = read_mask(args.gt, instance.graph.n_nodes)

    config = SolverConfig.from_settings(
        strategy=args.strategy,
        k=args.k,
        rel_gap=args.gap,
        time_limit=args.time_limit,
        node_limit=args.node_limit,
        rooted=not args.unrooted,
        root=args.root,
        use_singleton_leaf_cuts=False if args.no_leaf_cuts else None,
        use_component_leaf_cuts=args.component_leaf_cuts or None,
    )
    if args.unrooted:
        instance.root = None
    solver = SolverName(args.solver)
    result = run_solver(instance, solver, config)
    record = stats_record(instance, result, solver, config)

    if args.out:
        out = Path(args.out)
        write_solution(out, result.assignment, instance.graph)
        write_stats(out.with_suffix(".stats.json"), record)
    print(json.dumps(record, indent=2))
    return 0


def _cmd_gen(args: argparse.Namespace) -> int:
    instance = gen_random(args.extents, args.radius, args.seed)
    write_grid_probabilities(args.out, args.extents, instance.probabilities)
    if args.truth:
        write_solution(args.truth, instance.ground_truth, instance.graph)
    logger.info("wrote %s (%d nodes)", args.out, instance.graph.n_nodes)
    return 0


def _cmd_eval(args: argparse.Namespace) -> int:
    pred = read_mask(args.pred)
    truth = read_mask(args.truth, len(pred))
    record = score(pred, truth).to_dict()
    if args.instance:
        instance = read_instance(args.instance)
        record["objective"] = objective(pred, instance.weights)
    print(json.dumps(record, indent=2))
    return 0


def _cmd_bench(args: argparse.Namespace) -> int:
    if args.with_and_without_leaf_cuts:
        leaf_cut_modes = [True, False]
    elif args.no_leaf_cuts:
        leaf_cut_modes = [False]
    else:
        leaf_cut_modes = [settings.leaf_cuts_default]

    cases = build_cases(
        extents=args.extents,
        n_instances=args.instances,
        seed=args.seed,
        radius=args.radius,
        solvers=args.solvers,
        strategies=args.strategies,
        ks=args.k or [settings.default_k],
        leaf_cut_modes=leaf_cut_modes,
        rel_gap=args.gap if args.gap is not None else settings.default_rel_gap,
        time_limit=args.time_limit if args.time_limit is not None else settings.default_time_limit,
        timings=args.timings,
    )
    frame = run_bench(cases, workers=args.workers or settings.bench_workers)
    write_csv(frame, args.out if args.out else sys.stdout)

    if args.db:
        engine = make_engine(args.db)
        init_db(engine)
        with SessionLocal(bind=engine) as db:
            record_runs(db, frame)

    if args.report:
        analytics = BenchmarkAnalytics(frame)
        print(analytics.leaf_cut_ratios().to_string(index=False), file=sys.stderr)
        print(analytics.strategy_agreement().to_string(index=False), file=sys.stderr)
        print(f"geodesic match fraction: {analytics.geodesic_match_fraction():.3f}", file=sys.stderr)
    return 0


COMMANDS = {
    "solve": _cmd_solve,
    "gen": _cmd_gen,
    "eval": _cmd_eval,
    "bench": _cmd_bench,
}


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    configure_logging(args.log_level)
    try:
        return COMMANDS[args.command](args)
    except (MCCSError, ValidationError) as exc:
        print(f"mccs {args.command}: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
