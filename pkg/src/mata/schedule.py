"""Route schedules, the four constraint violations, cost and feasibility.

A Route lists user vertices only (depot legs implicit). evaluate_route runs
the eight-step scheduling scheme from the kernel and reports the route's
violation contribution; violations()/cost() aggregate per-route results in
route order so repeated evaluation is bitwise reproducible.
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field

from . import kernel as _kernel
from .instance import Instance

EPS = 1e-9


class RouteStructureError(ValueError):
    """Route violates pairing/precedence structure; lists all breaches."""

    def __init__(self, problems: list[str]):
        self.problems = problems
        super().__init__("; ".join(problems))


@dataclass(frozen=True)
class Route:
    vehicle: int
    visits: tuple[int, ...]


@dataclass(frozen=True)
class Violations:
    """Eq-style violation totals: passengers over capacity, minutes otherwise."""

    load: float
    duration: float
    time_window: float
    ride_time: float

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.load, self.duration, self.time_window, self.ride_time)


ZERO_VIOLATIONS = Violations(0.0, 0.0, 0.0, 0.0)


@dataclass(frozen=True)
class Schedule:
    """Visit times for one route, depot start (index 0) and return included."""

    vertices: tuple[int, ...]
    arrival: tuple[float, ...]
    begin_service: tuple[float, ...]
    wait: tuple[float, ...]
    departure: tuple[float, ...]
    duration: float
    max_load: int
    ride_times: dict[int, float] = field(default_factory=dict)

    @property
    def depot_departure(self) -> float:
        return self.departure[0]

    @property
    def depot_return(self) -> float:
        return self.arrival[-1]


def structure_problems(n: int, visits) -> list[str]:
    """Human-readable pairing/precedence breaches for a visit sequence."""
    problems = []
    seen: dict[int, int] = {}
    for pos, v in enumerate(visits):
        if not 1 <= v <= 2 * n:
            problems.append(f"vertex {v} out of range 1..{2 * n}")
            continue
        if v in seen:
            problems.append(f"vertex {v} visited twice")
        seen[v] = pos
    for v, pos in seen.items():
        if v <= n:
            if v + n not in seen:
                problems.append(f"pickup {v} without dropoff {v + n}")
        else:
            p = seen.get(v - n)
            if p is None:
                problems.append(f"dropoff {v} without pickup {v - n}")
            elif p > pos:
                problems.append(f"dropoff {v} precedes pickup {v - n}")
    return problems


def _visits_of(route) -> list[int]:
    return list(route.visits) if isinstance(route, Route) else list(route)


def evaluate_route(instance: Instance, route) -> tuple[Schedule, Violations]:
    """Schedule a route with the eight-step scheme; violation contribution.

    Raises RouteStructureError when request vertices are unpaired, repeated
    or out of order.
    """
    visits = _visits_of(route)
    res = instance.kernel.evaluate(visits)
    if res[0] != _kernel.OK:
        raise RouteStructureError(structure_problems(instance.n, visits))
    (_, _cost, duration, max_load, qv, dv, wv, tv, arr, beg, wai, dep, rides) = res
    sched = Schedule(
        vertices=(0, *visits, 0),
        arrival=tuple(arr),
        begin_service=tuple(beg),
        wait=tuple(wai),
        departure=tuple(dep),
        duration=duration,
        max_load=max_load,
        ride_times=dict(rides),
    )
    return sched, Violations(qv, dv, wv, tv)


class Solution:
    """m routes plus the set of unserved requests.

    Mutable, single-owner; per-route costs are kept canonical (recomputed by
    the kernel after every change) so the cached total equals a fresh
    cost() recomputation bit for bit.
    """

    __slots__ = ("n", "m", "visits", "route_costs", "request_route", "unserved")

    def __init__(self, n: int, m: int):
        self.n = n
        self.m = m
        self.visits: list[list[int]] = [[] for _ in range(m)]
        self.route_costs: list[float] = [0.0] * m
        self.request_route: list[int] = [-1] * (n + 1)
        self.unserved: set[int] = set(range(1, n + 1))

    @property
    def cost(self) -> float:
        total = 0.0
        for c in self.route_costs:
            total += c
        return total

    @property
    def served_count(self) -> int:
        return self.n - len(self.unserved)

    @property
    def routes(self) -> list[Route]:
        return [Route(k, tuple(v)) for k, v in enumerate(self.visits)]

    def route_of(self, request: int) -> int:
        return self.request_route[request]

    def clone(self) -> "Solution":
        other = Solution.__new__(Solution)
        other.n = self.n
        other.m = self.m
        other.visits = [list(v) for v in self.visits]
        other.route_costs = list(self.route_costs)
        other.request_route = list(self.request_route)
        other.unserved = set(self.unserved)
        return other

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Solution)
            and self.visits == other.visits
            and self.unserved == other.unserved
        )


def empty_solution(instance: Instance) -> Solution:
    return Solution(instance.n, instance.m)


def cost(instance: Instance, solution: Solution) -> float:
    """f(x): total travel time over all routes, depot legs included."""
    kern = instance.kernel
    total = 0.0
    for visits in solution.visits:
        total += kern.route_cost(visits)
    return total


def violations(instance: Instance, solution: Solution) -> Violations:
    """Componentwise violation sums over all routes (Eq. 1-4 style)."""
    q = d = w = t = 0.0
    for visits in solution.visits:
        _, contrib = evaluate_route(instance, visits)
        q += contrib.load
        d += contrib.duration
        w += contrib.time_window
        t += contrib.ride_time
    return Violations(q, d, w, t)


def is_feasible(v: Violations) -> bool:
    return v.load == 0.0 and v.duration == 0.0 and v.time_window == 0.0 and v.ride_time == 0.0


def is_complete(solution: Solution) -> bool:
    return not solution.unserved


# ----------------------------------------------------------------------
# solution text format
# ----------------------------------------------------------------------
#   cost <decimal>
#   unserved <space-separated request indices or "-">
#   route <k>: <vid>@<B> <vid>@<B> ...
# Begin-of-service times are printed to 3 decimals; re-evaluation on load
# is authoritative, so the text round trip need not be bit exact.


def write_solution(instance: Instance, solution: Solution, fh) -> None:
    close = False
    if isinstance(fh, (str, bytes)):
        fh = open(fh, "w", encoding="utf-8")
        close = True
    try:
        fh.write(f"cost {solution.cost!r}\n")
        unserved = " ".join(str(i) for i in sorted(solution.unserved)) or "-"
        fh.write(f"unserved {unserved}\n")
        for k, visits in enumerate(solution.visits):
            if visits:
                sched, _ = evaluate_route(instance, visits)
                stops = " ".join(
                    f"{v}@{sched.begin_service[i + 1]:.3f}" for i, v in enumerate(visits)
                )
            else:
                stops = ""
            fh.write(f"route {k}: {stops}".rstrip() + "\n")
    finally:
        if close:
            fh.close()


def format_solution(instance: Instance, solution: Solution) -> str:
    buf = io.StringIO()
    write_solution(instance, solution, buf)
    return buf.getvalue()


class SolutionFormatError(ValueError):
    pass


def read_solution(instance: Instance, fh):
    """Parse the solution text format.

    Returns (solution, claimed_cost, claimed_begins) where claimed_begins
    maps vehicle -> list of begin-service times in visit order. The solution
    is rebuilt from the visit sequences; callers re-evaluate it.
    """
    close = False
    if isinstance(fh, (str, bytes)):
        fh = open(fh, "r", encoding="utf-8")
        close = True
    try:
        lines = [ln.strip() for ln in fh.read().splitlines() if ln.strip()]
    finally:
        if close:
            fh.close()
    if len(lines) < 2 + instance.m:
        raise SolutionFormatError(
            f"expected at least {2 + instance.m} lines (cost, unserved, {instance.m} routes)"
        )
    if not lines[0].startswith("cost "):
        raise SolutionFormatError("first line must be `cost <decimal>`")
    try:
        claimed_cost = float(lines[0].split()[1])
    except (IndexError, ValueError):
        raise SolutionFormatError("unparseable cost line") from None
    if not lines[1].startswith("unserved"):
        raise SolutionFormatError("second line must be `unserved ...`")
    unserved_fields = lines[1].split()[1:]
    try:
        claimed_unserved = (
            set()
            if unserved_fields == ["-"] or not unserved_fields
            else {int(f) for f in unserved_fields}
        )
    except ValueError:
        raise SolutionFormatError("unparseable unserved line") from None

    solution = Solution(instance.n, instance.m)
    claimed_begins: dict[int, list[float]] = {}
    kern = instance.kernel
    for ln in lines[2:]:
        if not ln.startswith("route "):
            raise SolutionFormatError(f"unexpected line: {ln!r}")
        head, _, rest = ln.partition(":")
        try:
            k = int(head.split()[1])
        except (IndexError, ValueError):
            raise SolutionFormatError(f"unparseable route header: {ln!r}") from None
        if not 0 <= k < instance.m:
            raise SolutionFormatError(f"vehicle index {k} out of range 0..{instance.m - 1}")
        visits = []
        begins = []
        for stop in rest.split():
            vid_s, _, b_s = stop.partition("@")
            try:
                vid = int(vid_s)
                begins.append(float(b_s) if b_s else float("nan"))
            except ValueError:
                raise SolutionFormatError(f"unparseable stop {stop!r} in route {k}") from None
            visits.append(vid)
        solution.visits[k] = visits
        solution.route_costs[k] = kern.route_cost(visits)
        claimed_begins[k] = begins
        for v in visits:
            if 1 <= v <= instance.n:
                solution.request_route[v] = k
                solution.unserved.discard(v)
    if claimed_unserved != solution.unserved:
        raise SolutionFormatError(
            f"unserved line {sorted(claimed_unserved)} does not match routes "
            f"(actual {sorted(solution.unserved)})"
        )
    return solution, claimed_cost, claimed_begins
