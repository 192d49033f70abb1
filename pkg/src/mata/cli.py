"""Command line interface: solve, bench, validate, gap, oracle.

Exit codes: 0 success; 1 parse/parameter errors; 2 solve finished without a
feasible complete solution; 3 validation failures.
"""

from __future__ import annotations

import argparse
import sys

from . import bench as bench_mod
from . import schedule as sched
from .engine import EngineConfig, anneal
from .instance import InfeasibleRequestError, ParseError, load_instance, tighten_time_windows
from .oracle import OracleGuardError, exact_solve
from .trace import write_trace
from .validate import validate


def _add_engine_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--time-limit-ms", type=float, default=None,
                   help="wall-clock budget per run (default 60000 unless --iterations)")
    p.add_argument("--iterations", type=int, default=None,
                   help="iteration budget (mutually exclusive with --time-limit-ms)")
    p.add_argument("--t-max", type=float, default=None, help="start temperature (default n/2)")
    p.add_argument("--t-min", type=float, default=None, help="reheat floor (default m/2)")
    p.add_argument("--lambda-t", type=float, default=0.01, help="temperature decay rate")
    p.add_argument("--delta-max", type=int, default=30, help="no-improvement restart limit")


def _engine_config(args, seed: int) -> EngineConfig:
    time_limit = args.time_limit_ms
    if time_limit is None and args.iterations is None:
        time_limit = 60_000.0
    if time_limit is not None and args.iterations is not None:
        raise ValueError("--time-limit-ms and --iterations are mutually exclusive")
    return EngineConfig(
        t_max=args.t_max,
        t_min=args.t_min,
        lambda_t=args.lambda_t,
        delta_max=args.delta_max,
        time_limit_ms=time_limit,
        iterations=args.iterations,
        rng_seed=seed,
    )


def _load_adjusted(path):
    instance = load_instance(path)
    return tighten_time_windows(instance)


def cmd_solve(args) -> int:
    try:
        instance = _load_adjusted(args.instance)
        config = _engine_config(args, args.seed)
    except (OSError, ParseError, InfeasibleRequestError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1

    records = []
    result = anneal(instance, config, observer=records.append)
    if args.trace:
        write_trace(records, args.trace)

    best = result.best
    if best is None:
        print(
            f"no feasible complete solution found "
            f"({result.iterations} iterations, {result.elapsed_ms:.0f} ms)"
        )
        return 2
    if args.solution:
        sched.write_solution(instance, best, args.solution)
    line = (
        f"cost {best.cost:.2f}  served {best.served_count}/{instance.n}  "
        f"iterations {result.iterations}  elapsed {result.elapsed_ms:.0f} ms"
    )
    bks = args.bks if args.bks is not None else bench_mod.lookup_bks(instance.name)
    if bks:
        line += f"  gap {bench_mod.gap(best.cost, bks):.2f}%"
    print(line)
    return 0


def cmd_bench(args) -> int:
    try:
        instance = _load_adjusted(args.instance)
        seeds = [int(s) for s in args.seeds.split(",")] if args.seeds else list(bench_mod.DEFAULT_SEEDS)
        checkpoints = (
            [float(c) for c in args.checkpoints.split(",")]
            if args.checkpoints
            else list(bench_mod.DEFAULT_CHECKPOINTS_S)
        )
        budget = args.time_limit_ms if args.time_limit_ms is not None else bench_mod.DEFAULT_BUDGET_MS
        if args.iterations is not None:
            raise ValueError("bench uses wall-clock budgets; --iterations is not supported here")
    except (OSError, ParseError, InfeasibleRequestError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1

    summary, trials = bench_mod.run_bench(
        instance,
        seeds=seeds,
        budget_ms=budget,
        checkpoints_s=checkpoints,
        bks=args.bks,
        t_max=args.t_max,
        t_min=args.t_min,
        lambda_t=args.lambda_t,
        delta_max=args.delta_max,
    )
    if args.trace:
        for trial in trials:
            write_trace(trial.records, f"{args.trace}.seed{trial.seed}.csv")
    print(bench_mod.summary_csv(summary))
    print(bench_mod.summary_table(summary))
    return 0 if len(summary.failed_seeds) < len(trials) else 2


def cmd_validate(args) -> int:
    try:
        instance = _load_adjusted(args.instance)
    except (OSError, ParseError, InfeasibleRequestError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    try:
        solution, claimed_cost, claimed_begins = sched.read_solution(instance, args.solution)
    except (OSError, sched.SolutionFormatError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1

    report = validate(
        instance,
        solution,
        claimed_cost=claimed_cost,
        witness_begins=claimed_begins,
        witness_tol=2e-3,  # begin times are written with 3 decimals
    )
    print(report.summary())
    if not report.ok or not report.feasible_fast or solution.unserved:
        return 3
    return 0


def cmd_gap(args) -> int:
    try:
        print(f"{bench_mod.gap(args.cost, args.bks):.2f}")
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


def cmd_oracle(args) -> int:
    try:
        instance = _load_adjusted(args.instance)
        result = exact_solve(instance)
    except (OSError, ParseError, InfeasibleRequestError, OracleGuardError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    if result.infeasible:
        print(f"infeasible (explored {result.explored} orderings)")
        return 2
    print(f"optimal cost {result.optimal_cost:.2f}  explored {result.explored} orderings")
    print(sched.format_solution(instance, result.optimal_solution), end="")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mata",
        description="Multi-atomic annealing solver for the static dial-a-ride problem",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="solve one instance")
    p.add_argument("instance")
    p.add_argument("--seed", type=int, default=1)
    _add_engine_flags(p)
    p.add_argument("--bks", type=float, default=None, help="best known cost for gap reporting")
    p.add_argument("--trace", default=None, help="write convergence trace CSV here")
    p.add_argument("--solution", default=None, help="write the best solution here")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("bench", help="multi-seed benchmark with checkpoint medians")
    p.add_argument("instance")
    p.add_argument("--seeds", default=None, help="comma list (default 1,2,3,4,5)")
    _add_engine_flags(p)
    p.add_argument("--checkpoints", default=None, help="comma list of seconds (default 1,2,5,15,30,60)")
    p.add_argument("--bks", type=float, default=None)
    p.add_argument("--trace", default=None, help="trace file prefix (one file per seed)")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("validate", help="independently check a solution file")
    p.add_argument("instance")
    p.add_argument("solution")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("gap", help="percentage gap of a cost against a BKS")
    p.add_argument("cost", type=float)
    p.add_argument("bks", type=float)
    p.set_defaults(func=cmd_gap)

    p = sub.add_parser("oracle", help="exact optimum of a tiny instance")
    p.add_argument("instance")
    p.set_defaults(func=cmd_oracle)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
