"""The multi-atomic annealing engine: sequencing, construction, burn/reform,
temperature schedule, restart, and the main loop.

The search never leaves the feasible space: construction and reform insert a
request only where the eight-step evaluation certifies zero violations, and
burn only removes requests, which cannot create violations. Completeness is
not required of intermediate solutions; only feasible AND complete solutions
are ever accepted as the incumbent best.

Randomness comes from one seeded generator per run and is consumed in a
fixed documented order (see anneal), so identical seed and iteration budget
reproduce the run exactly.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, replace

from . import schedule as sched
from .instance import Instance
from .schedule import Solution, empty_solution, is_complete
from .trace import TraceRecord
from .validate import violations_from_witness


@dataclass(frozen=True)
class EngineConfig:
    """Annealing parameters; t_max/t_min default to n/2 and m/2 at run time."""

    t_max: float | None = None
    t_min: float | None = None
    lambda_t: float = 0.01
    delta_max: int = 30
    time_limit_ms: float | None = None
    iterations: int | None = None
    rng_seed: int = 0

    def resolve(self, instance: Instance) -> "EngineConfig":
        cfg = self
        if cfg.t_max is None:
            cfg = replace(cfg, t_max=instance.n / 2)
        if cfg.t_min is None:
            cfg = replace(cfg, t_min=instance.m / 2)
        if (cfg.time_limit_ms is None) == (cfg.iterations is None):
            raise ValueError("exactly one of time_limit_ms / iterations must be set")
        if not 0 < cfg.t_min <= cfg.t_max:
            raise ValueError(f"need 0 < t_min <= t_max, got {cfg.t_min}, {cfg.t_max}")
        if not 0 < cfg.lambda_t < 1:
            raise ValueError(f"lambda_t must be in (0,1), got {cfg.lambda_t}")
        if cfg.delta_max < 0:
            raise ValueError(f"delta_max must be >= 0, got {cfg.delta_max}")
        return cfg


@dataclass(frozen=True)
class Placement:
    route: int
    pickup_pos: int
    dropoff_pos: int
    cost_increase: float


@dataclass
class AnnealResult:
    best: Solution | None
    iterations: int
    elapsed_ms: float


def build_sorted_list(instance: Instance) -> list[int]:
    """Requests ascending by window_close(pickup) + window_open(dropoff).

    The instance must already be time-window adjusted; ties break on the
    request index (stable).
    """
    return [r.index for r in sorted(instance.requests, key=lambda r: (r.sort_key, r.index))]


def build_random_list(n: int, rng: random.Random) -> list[int]:
    """Uniform permutation of 1..n drawn from the engine's RNG stream."""
    order = list(range(1, n + 1))
    rng.shuffle(order)
    return order


def best_insertion(instance: Instance, solution: Solution, request: int) -> Placement | None:
    """Cheapest feasible placement of an unserved request across all routes.

    Per route, pickup positions are scanned in detour order and the first
    position admitting a feasible dropoff supplies that route's candidate
    (two-step insertion / neighborhood reduction). Ties across routes go to
    the lowest route index. None when no route can take the request.
    """
    if solution.request_route[request] != -1:
        raise ValueError(f"request {request} is already served")
    kern = instance.kernel
    best: Placement | None = None
    for k in range(solution.m):
        res = kern.check_insertion(solution.visits[k], request)
        if res is not None and (best is None or res[2] < best.cost_increase):
            best = Placement(k, res[0], res[1], res[2])
    return best


def apply_placement(instance: Instance, solution: Solution, request: int, placement: Placement) -> None:
    visits = solution.visits[placement.route]
    visits.insert(placement.pickup_pos, request)
    visits.insert(placement.dropoff_pos, request + solution.n)
    solution.route_costs[placement.route] = instance.kernel.route_cost(visits)
    solution.request_route[request] = placement.route
    solution.unserved.discard(request)


def remove_request(instance: Instance, solution: Solution, request: int) -> None:
    k = solution.request_route[request]
    if k == -1:
        return
    dropoff = request + solution.n
    solution.visits[k] = [v for v in solution.visits[k] if v != request and v != dropoff]
    solution.route_costs[k] = instance.kernel.route_cost(solution.visits[k])
    solution.request_route[request] = -1
    solution.unserved.add(request)


def construct(instance: Instance, sorted_list: list[int]) -> Solution:
    """Initial solution: insert requests in list order at their best
    positions; requests with no feasible placement stay unserved."""
    solution = empty_solution(instance)
    for request in sorted_list:
        placement = best_insertion(instance, solution, request)
        if placement is not None:
            apply_placement(instance, solution, request, placement)
    return solution


def burn(
    instance: Instance,
    solution: Solution,
    temperature: float,
    sorted_list: list[int],
    rng: random.Random,
) -> None:
    """Remove a temperature-sized contiguous band of sorted-list positions.

    Draws R uniform in [1, floor(T)] (floored T clamped to >= 1) then a
    start position uniform in [1, n]; positions start..min(n, start+R)
    inclusive are removed, so the band holds up to R+1 requests. Unserved
    requests in the band are skipped. Removal never creates violations.
    """
    n = solution.n
    if n == 0:
        return
    r_cap = int(temperature)
    if r_cap < 1:
        r_cap = 1
    band = rng.randint(1, r_cap)
    start = rng.randint(1, n)
    end = min(n, start + band)
    for pos in range(start, end + 1):
        remove_request(instance, solution, sorted_list[pos - 1])


def reform(instance: Instance, solution: Solution, rng: random.Random) -> None:
    """Reinsert every request in a fresh random order at its best position.

    Served requests are first removed, then reinserted (possibly elsewhere);
    requests with no feasible placement are left unserved.
    """
    for request in build_random_list(solution.n, rng):
        if solution.request_route[request] != -1:
            remove_request(instance, solution, request)
        placement = best_insertion(instance, solution, request)
        if placement is not None:
            apply_placement(instance, solution, request, placement)


def step_temperature(temperature: float, config: EngineConfig, rng: random.Random) -> tuple[float, bool]:
    """Geometric decay with reheating.

    A temperature already below t_min is replaced by a uniform real draw
    from [t_min, t_max] (the reheat); otherwise it decays by (1 - lambda_t).
    Equality with t_min does not reheat, so one sub-t_min value is visible
    before the redraw. Returns (new_temperature, reheated).
    """
    if temperature < config.t_min:
        return rng.uniform(config.t_min, config.t_max), True
    return temperature * (1.0 - config.lambda_t), False


def anneal(
    instance: Instance,
    config: EngineConfig,
    observer=None,
    inspect=None,
) -> AnnealResult:
    """Run the annealing loop until the time or iteration budget is spent.

    Per iteration the RNG stream is consumed in this fixed order: burn band
    size, burn start position, the reform shuffle, then (only when a reheat
    triggers) the reheat draw. `observer`, when given, receives TraceRecord
    rows at construction, every improvement/restart/reheat, and periodic
    ticks. `inspect` is a testing hook called as inspect(phase, solution,
    best, state-dict) after construct/burn/reform/restart.

    Returns the best feasible complete solution found (None when there was
    none, a legitimate outcome reported upward).
    """
    config = config.resolve(instance)
    rng = random.Random(config.rng_seed)
    start = time.perf_counter()

    def elapsed_ms() -> float:
        return (time.perf_counter() - start) * 1000.0

    temperature = config.t_max
    delta = 0
    iteration = 0
    best: Solution | None = None
    best_cost = float("inf")
    last_emit_iter = 0
    last_emit_ms = 0.0
    time_based = config.time_limit_ms is not None

    def emit(event: str, current: Solution) -> None:
        nonlocal last_emit_iter, last_emit_ms
        now = elapsed_ms()
        if observer is not None:
            observer(
                TraceRecord(
                    elapsed_ms=now,
                    iteration=iteration,
                    temperature=temperature,
                    best_cost=None if best is None else best_cost,
                    best_served=0 if best is None else best.served_count,
                    current_cost=current.cost,
                    current_served=current.served_count,
                    event=event,
                )
            )
        last_emit_iter = iteration
        last_emit_ms = now

    def accept_if_better(current: Solution) -> bool:
        nonlocal best, best_cost
        if current.unserved:
            return False
        current_cost = current.cost
        if current_cost >= best_cost:
            return False
        witness = violations_from_witness(instance, current)
        if witness.as_tuple() != (0.0, 0.0, 0.0, 0.0):
            raise AssertionError(
                f"feasible-space invariant broken: accepted candidate has "
                f"violations {witness.as_tuple()}"
            )
        best = current.clone()
        best_cost = current_cost
        return True

    sorted_list = build_sorted_list(instance)
    x = construct(instance, sorted_list)
    accept_if_better(x)
    emit("construct", x)
    if inspect is not None:
        inspect("construct", x, best, {"temperature": temperature, "delta": delta, "iteration": 0})

    def terminated() -> bool:
        if config.iterations is not None:
            return iteration >= config.iterations
        return elapsed_ms() >= config.time_limit_ms

    while not terminated():
        iteration += 1
        burn(instance, x, temperature, sorted_list, rng)
        if inspect is not None:
            inspect("burn", x, best, {"temperature": temperature, "delta": delta, "iteration": iteration})
        reform(instance, x, rng)
        if inspect is not None:
            inspect("reform", x, best, {"temperature": temperature, "delta": delta, "iteration": iteration})

        if accept_if_better(x):
            emit("improve", x)
        else:
            delta += 1

        if delta > config.delta_max:
            if best is not None:
                x = best.clone()
            delta = 0
            emit("restart", x)
            if inspect is not None:
                inspect("restart", x, best, {"temperature": temperature, "delta": delta, "iteration": iteration})

        temperature, reheated = step_temperature(temperature, config, rng)
        if reheated:
            emit("reheat", x)

        if iteration - last_emit_iter >= 100 or (
            time_based and elapsed_ms() - last_emit_ms >= 10.0
        ):
            emit("tick", x)

    return AnnealResult(best=best, iterations=iteration, elapsed_ms=elapsed_ms())


def solve(
    instance: Instance,
    config: EngineConfig,
    collect_trace: bool = False,
):
    """Convenience wrapper: run anneal and optionally collect the trace.

    Returns (AnnealResult, list[TraceRecord] | None).
    """
    records: list[TraceRecord] | None = [] if collect_trace else None
    observer = records.append if collect_trace else None
    result = anneal(instance, config, observer=observer)
    return result, records


def violations_of(instance: Instance, solution: Solution) -> sched.Violations:
    return sched.violations(instance, solution)


__all__ = [
    "EngineConfig",
    "Placement",
    "AnnealResult",
    "build_sorted_list",
    "build_random_list",
    "best_insertion",
    "apply_placement",
    "remove_request",
    "construct",
    "burn",
    "reform",
    "step_temperature",
    "anneal",
    "solve",
]
