"""Exhaustive exact solver for tiny instances (test ground truth).

Enumerates every assignment of requests to vehicles and, per vehicle, every
precedence-respecting visit order (generated by interleaving pickups with
onboard dropoffs rather than filtering permutations). Each order is scored
with the same route evaluator the solver uses; the cheapest feasible
complete solution wins. Guarded to n <= 5, m <= 2 — the ordering count per
vehicle is (2k)!/2^k.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .instance import Instance
from .schedule import Solution

GUARD_N = 5
GUARD_M = 2


class OracleGuardError(ValueError):
    pass


@dataclass
class OracleResult:
    optimal_cost: float | None  # None when no feasible complete solution exists
    optimal_solution: Solution | None
    explored: int

    @property
    def infeasible(self) -> bool:
        return self.optimal_cost is None


def _orderings(requests: tuple[int, ...], n: int):
    """All precedence-respecting visit orders for one vehicle (DFS, ascending
    tie order, so enumeration is deterministic)."""
    route: list[int] = []
    onboard: list[int] = []
    remaining = list(requests)

    def rec():
        if not remaining and not onboard:
            yield list(route)
            return
        for i, r in enumerate(list(remaining)):
            remaining.pop(i)
            onboard.append(r)
            route.append(r)
            yield from rec()
            route.pop()
            onboard.pop()
            remaining.insert(i, r)
        for i, r in enumerate(list(onboard)):
            onboard.pop(i)
            route.append(r + n)
            yield from rec()
            route.pop()
            onboard.insert(i, r)

    yield from rec()


def _best_route_for(instance: Instance, requests: tuple[int, ...]):
    """Cheapest feasible visit order serving exactly `requests` on one
    vehicle; returns (cost, route, explored)."""
    kern = instance.kernel
    best_cost = None
    best_route: list[int] | None = None
    explored = 0
    for route in _orderings(requests, instance.n):
        explored += 1
        if kern.feasible(route):
            c = kern.route_cost(route)
            if best_cost is None or c < best_cost:
                best_cost = c
                best_route = route
    return best_cost, best_route, explored


def exact_solve(instance: Instance) -> OracleResult:
    """Optimal complete solution by full enumeration.

    Raises OracleGuardError beyond n <= 5, m <= 2. Ties resolve to the first
    optimum in deterministic enumeration order, so relabeling-invariance
    holds for the optimal cost (not necessarily the routes).
    """
    if instance.n > GUARD_N or instance.m > GUARD_M:
        raise OracleGuardError(
            f"oracle limited to n <= {GUARD_N}, m <= {GUARD_M} "
            f"(got n={instance.n}, m={instance.m}); enumeration is factorial"
        )

    all_requests = tuple(range(1, instance.n + 1))
    explored = 0
    # one evaluation per distinct request subset; assignments combine them
    subset_best: dict[tuple[int, ...], tuple[float | None, list[int] | None]] = {}
    for k in range(instance.n + 1):
        for subset in combinations(all_requests, k):
            c, route, seen = _best_route_for(instance, subset)
            subset_best[subset] = (c, route)
            explored += seen

    best_cost: float | None = None
    best_parts: tuple[tuple[int, ...], ...] | None = None
    if instance.m == 1:
        c, _ = subset_best[all_requests]
        if c is not None:
            best_cost = c
            best_parts = (all_requests,)
    else:
        request_set = set(all_requests)
        for k in range(instance.n + 1):
            for first in combinations(all_requests, k):
                second = tuple(sorted(request_set - set(first)))
                c1, _ = subset_best[first]
                c2, _ = subset_best[second]
                if c1 is None or c2 is None:
                    continue
                total = c1 + c2
                if best_cost is None or total < best_cost:
                    best_cost = total
                    best_parts = (first, second)

    if best_cost is None:
        return OracleResult(None, None, explored)

    solution = Solution(instance.n, instance.m)
    kern = instance.kernel
    for vehicle, part in enumerate(best_parts):
        route = subset_best[part][1]
        solution.visits[vehicle] = list(route)
        solution.route_costs[vehicle] = kern.route_cost(route)
        for r in part:
            solution.request_route[r] = vehicle
            solution.unserved.discard(r)
    return OracleResult(best_cost, solution, explored)
