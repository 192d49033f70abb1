"""Benchmark harness: multi-seed trials, checkpoint medians, gaps, and
time-to-first-feasible, reproducing the measurement protocol behind the
published convergence tables.

Summaries are pure functions of the trial traces, so a summary recomputed
from trace files equals the one printed live.
"""

from __future__ import annotations

import json
import statistics
from dataclasses import dataclass, field
from importlib import resources

from .engine import AnnealResult, EngineConfig, anneal
from .instance import Instance
from .trace import TraceRecord

# Best known solution costs for the canonical benchmark instances, and
# calibrated reference costs for the bundled regenerated ones (see
# data/reference_costs.json and the README data note).
BKS = {
    "r1a": 190.02,
    "r3a": 532.00,
    "r6a": 785.26,
    "r8a": 487.84,
}

DEFAULT_CHECKPOINTS_S = (1.0, 2.0, 5.0, 15.0, 30.0, 60.0)
DEFAULT_SEEDS = (1, 2, 3, 4, 5)
DEFAULT_BUDGET_MS = 60_000.0


def _reference_costs() -> dict[str, float]:
    try:
        text = resources.files("mata").joinpath("data/reference_costs.json").read_text()
    except (FileNotFoundError, ModuleNotFoundError):
        return {}
    return {k.lower(): float(v) for k, v in json.loads(text).items()}


def lookup_bks(instance_name: str) -> float | None:
    """BKS by instance name: canonical table first, then calibrated refs."""
    key = instance_name.lower()
    if key in BKS:
        return BKS[key]
    return _reference_costs().get(key)


def gap(cost: float, bks: float) -> float:
    """Percentage excess of a cost over the best known solution cost."""
    if bks <= 0:
        raise ValueError(f"bks must be positive, got {bks}")
    return 100.0 * (cost - bks) / bks


@dataclass
class TrialResult:
    seed: int
    records: list[TraceRecord]
    final_cost: float | None
    final_served: int
    first_feasible_ms: float | None
    first_feasible_cost: float | None
    error: str | None = None


@dataclass
class BenchSummary:
    instance_name: str
    seeds: tuple[int, ...]
    budget_ms: float
    checkpoints_s: tuple[float, ...]
    bks: float | None
    median_checkpoint_costs: dict[float, float | None]
    median_checkpoint_gaps: dict[float, float | None]
    first_feasible: list[tuple[int, float | None, float | None]]  # seed, ms, cost
    final_median_cost: float | None
    final_gap: float | None
    failed_seeds: list[tuple[int, str]] = field(default_factory=list)


def checkpoint_cost(records: list[TraceRecord], checkpoint_ms: float) -> float | None:
    """Best cost of the last record at or before the checkpoint."""
    cost = None
    for r in records:
        if r.elapsed_ms > checkpoint_ms:
            break
        if r.best_cost is not None:
            cost = r.best_cost
    return cost


def first_feasible(records: list[TraceRecord]) -> tuple[float | None, float | None]:
    """(elapsed_ms, cost) of the first record with an incumbent present."""
    for r in records:
        if r.best_cost is not None:
            return r.elapsed_ms, r.best_cost
    return None, None


def summarize(
    instance_name: str,
    trials: list[TrialResult],
    budget_ms: float,
    checkpoints_s: tuple[float, ...],
    bks: float | None,
) -> BenchSummary:
    """Aggregate trials into a summary (pure; no engine access)."""
    ok_trials = [t for t in trials if t.error is None]
    median_costs: dict[float, float | None] = {}
    median_gaps: dict[float, float | None] = {}
    for cp in checkpoints_s:
        values = [
            c
            for t in ok_trials
            if (c := checkpoint_cost(t.records, cp * 1000.0)) is not None
        ]
        med = statistics.median(values) if values else None
        median_costs[cp] = med
        median_gaps[cp] = gap(med, bks) if (med is not None and bks) else None
    finals = [t.final_cost for t in ok_trials if t.final_cost is not None]
    final_median = statistics.median(finals) if finals else None
    return BenchSummary(
        instance_name=instance_name,
        seeds=tuple(t.seed for t in trials),
        budget_ms=budget_ms,
        checkpoints_s=tuple(checkpoints_s),
        bks=bks,
        median_checkpoint_costs=median_costs,
        median_checkpoint_gaps=median_gaps,
        first_feasible=[
            (t.seed, t.first_feasible_ms, t.first_feasible_cost) for t in ok_trials
        ],
        final_median_cost=final_median,
        final_gap=gap(final_median, bks) if (final_median is not None and bks) else None,
        failed_seeds=[(t.seed, t.error) for t in trials if t.error is not None],
    )


def run_trial(instance: Instance, seed: int, budget_ms: float | None = None,
              iterations: int | None = None, **config_kwargs) -> TrialResult:
    records: list[TraceRecord] = []
    config = EngineConfig(
        time_limit_ms=budget_ms,
        iterations=iterations,
        rng_seed=seed,
        **config_kwargs,
    )
    try:
        result: AnnealResult = anneal(instance, config, observer=records.append)
    except Exception as exc:  # a failed trial is reported, not fatal
        return TrialResult(seed, records, None, 0, None, None, error=repr(exc))
    best = result.best
    ff_ms, ff_cost = first_feasible(records)
    return TrialResult(
        seed=seed,
        records=records,
        final_cost=best.cost if best is not None else None,
        final_served=best.served_count if best is not None else 0,
        first_feasible_ms=ff_ms,
        first_feasible_cost=ff_cost,
    )


def run_bench(
    instance: Instance,
    seeds=DEFAULT_SEEDS,
    budget_ms: float = DEFAULT_BUDGET_MS,
    checkpoints_s=DEFAULT_CHECKPOINTS_S,
    bks: float | None = None,
    **config_kwargs,
) -> tuple[BenchSummary, list[TrialResult]]:
    """One trial per seed, sequentially (parallel trials would contend for
    cores and distort the per-trial wall clocks)."""
    if not seeds:
        raise ValueError("need at least one seed")
    if bks is None:
        bks = lookup_bks(instance.name)
    trials = [
        run_trial(instance, seed, budget_ms=budget_ms, **config_kwargs)
        for seed in seeds
    ]
    summary = summarize(instance.name, trials, budget_ms, tuple(checkpoints_s), bks)
    return summary, trials


def _fmt_cost(value: float | None) -> str:
    return f"{value:.2f}" if value is not None else "-"


def _fmt_gap(value: float | None) -> str:
    return f"{value:.2f}" if value is not None else "-"


def summary_csv(summary: BenchSummary) -> str:
    lines = ["section,key,value"]
    lines.append(f"meta,instance,{summary.instance_name}")
    lines.append(f"meta,seeds,{' '.join(map(str, summary.seeds))}")
    lines.append(f"meta,budget_ms,{summary.budget_ms:g}")
    lines.append(f"meta,bks,{summary.bks if summary.bks is not None else ''}")
    for cp in summary.checkpoints_s:
        lines.append(f"median_cost,{cp:g}s,{_fmt_cost(summary.median_checkpoint_costs[cp])}")
    for cp in summary.checkpoints_s:
        lines.append(f"median_gap,{cp:g}s,{_fmt_gap(summary.median_checkpoint_gaps[cp])}")
    for seed, ms, cost in summary.first_feasible:
        ms_s = f"{ms:.1f}" if ms is not None else "-"
        lines.append(f"first_feasible,seed {seed},{ms_s} ms @ {_fmt_cost(cost)}")
    lines.append(f"final,median_cost,{_fmt_cost(summary.final_median_cost)}")
    lines.append(f"final,gap,{_fmt_gap(summary.final_gap)}")
    for seed, err in summary.failed_seeds:
        lines.append(f"failed,seed {seed},{err}")
    return "\n".join(lines) + "\n"


def summary_table(summary: BenchSummary) -> str:
    head = f"instance {summary.instance_name}  seeds {list(summary.seeds)}  budget {summary.budget_ms / 1000:g}s"
    if summary.bks is not None:
        head += f"  bks {summary.bks:.2f}"
    lines = [head, ""]
    cps = summary.checkpoints_s
    w = 10
    lines.append("checkpoint " + "".join(f"{cp:>{w}.0f}s" for cp in cps))
    lines.append(
        "med cost   "
        + "".join(f"{_fmt_cost(summary.median_checkpoint_costs[cp]):>{w}} " for cp in cps)
    )
    if summary.bks is not None:
        lines.append(
            "med gap%   "
            + "".join(f"{_fmt_gap(summary.median_checkpoint_gaps[cp]):>{w}} " for cp in cps)
        )
    lines.append("")
    lines.append("first feasible:")
    for seed, ms, cost_v in summary.first_feasible:
        ms_s = f"{ms:.1f} ms" if ms is not None else "never"
        lines.append(f"  seed {seed:<4d} {ms_s:>12}  cost {_fmt_cost(cost_v)}")
    for seed, err in summary.failed_seeds:
        lines.append(f"  seed {seed:<4d} FAILED: {err}")
    lines.append("")
    lines.append(
        f"final median cost {_fmt_cost(summary.final_median_cost)}"
        + (f"  gap {_fmt_gap(summary.final_gap)}%" if summary.final_gap is not None else "")
    )
    return "\n".join(lines) + "\n"
