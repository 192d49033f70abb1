"""Independent cross-check of the fast route evaluator.

The validator recomputes structure, cost, and schedules from scratch with
deliberately simple machinery: plain forward simulation, an exhaustive
depot-departure search on a 0.1-minute grid, and an arithmetic re-derivation
of a begin-service witness (the claimed schedule — supplied by a solution
file or taken from the evaluator under test). It never uses the scheduling
kernel for its own numbers; kernel results enter only as the "other side"
of the comparison. Disagreements are report contents, not exceptions.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .instance import Instance
from .schedule import Solution, Violations, evaluate_route, structure_problems

COST_TOL = 1e-6
EPS = 1e-9
GRID_STEP = 0.1

_COMPONENTS = ("load", "duration", "time_window", "ride_time")


@dataclass
class RouteCheck:
    vehicle: int
    structural: list[str]
    fast: tuple[float, float, float, float] | None = None
    earliest: tuple[float, float, float, float] | None = None
    witness: tuple[float, float, float, float] | None = None
    witness_consistent: bool | None = None
    search_feasible: bool | None = None
    confirmed_feasible: bool = False


@dataclass
class ValidationReport:
    structure: list[str]
    cost_recomputed: float
    cost_cached: float
    cost_claimed: float | None
    routes: list[RouteCheck]
    disagreements: list[str]
    feasible_fast: bool
    feasible_confirmed: bool

    @property
    def ok(self) -> bool:
        return not self.structure and not self.disagreements

    def summary(self) -> str:
        lines = [f"validation {'OK' if self.ok else 'FAILED'}"]
        lines.append(
            f"cost recomputed {self.cost_recomputed:.6f} (cached {self.cost_cached:.6f}"
            + (f", claimed {self.cost_claimed:.6f})" if self.cost_claimed is not None else ")")
        )
        for p in self.structure:
            lines.append(f"structure: {p}")
        for d in self.disagreements:
            lines.append(f"disagreement: {d}")
        lines.append(f"feasible: fast={self.feasible_fast} confirmed={self.feasible_confirmed}")
        return "\n".join(lines)


class Validator:
    """Holds plain-float copies of instance data for the simple simulations."""

    def __init__(self, instance: Instance):
        self.instance = instance
        self.n = instance.n
        self.e = [v.window_open for v in instance.vertices]
        self.l = [v.window_close for v in instance.vertices]
        self.srv = [v.service_duration for v in instance.vertices]
        self.load = [v.load_change for v in instance.vertices]
        self.tt = [[float(x) for x in row] for row in instance.travel_time_matrix]
        self.capacity = instance.capacity
        self.duration_bound = instance.route_duration_bound
        self.ride_bound = instance.ride_time_bound

    # -- independent primitives -----------------------------------------

    def leg_cost(self, visits) -> float:
        total = 0.0
        prev = 0
        for v in visits:
            total += self.tt[prev][v]
            prev = v
        return total + self.tt[prev][0]

    def max_load(self, visits) -> int:
        running = worst = 0
        for v in visits:
            running += self.load[v]
            worst = max(worst, running)
        return worst

    def simulate(self, visits, depart: float):
        """Greedy forward simulation (begin as early as allowed, no added
        waits) from a given depot departure; returns (q, d, w, t)."""
        w = t = 0.0
        now = depart
        prev = 0
        departures: dict[int, float] = {}
        for v in visits:
            arrive = now + self.tt[prev][v]
            begin = max(arrive, self.e[v])
            late = begin - self.l[v]
            if late > EPS:
                w += late
            if v > self.n:
                ride = begin - departures[v - self.n]
                over = ride - self.ride_bound
                if over > EPS:
                    t += over
            now = begin + self.srv[v]
            departures[v] = now
            prev = v
        duration = (now + self.tt[prev][0]) - depart if visits else 0.0
        d_over = duration - self.duration_bound
        d = d_over if d_over > EPS else 0.0
        q_over = self.max_load(visits) - self.capacity
        q = float(q_over) if q_over > 0 else 0.0
        return (q, d, w, t)

    def depot_grid_search(self, visits) -> tuple[bool, float]:
        """Scan depot departures over the depot window on the 0.1-min grid.

        Returns (found_violation_free, best_total_violation).
        """
        e0, l0 = self.e[0], self.l[0]
        best = float("inf")
        steps = int((l0 - e0) / GRID_STEP) + 1
        for k in range(steps + 1):
            depart = min(e0 + k * GRID_STEP, l0)
            q, d, w, t = self.simulate(visits, depart)
            total = q + d + w + t
            if total < best:
                best = total
                if best == 0.0:
                    return True, 0.0
        return False, best

    def witness_violations(self, visits, begins, tol: float):
        """Re-derive violations from claimed begin-service times alone.

        Returns (consistent, (q, d, w, t)). Consistent means every begin
        respects its arrival chain and window open within tol, i.e. the
        claimed schedule is physically executable. The depot departure is
        taken as late as the first begin allows (never increases duration).
        """
        if len(begins) != len(visits):
            return False, (0.0, 0.0, 0.0, 0.0)
        if not visits:
            return True, (0.0, 0.0, 0.0, 0.0)
        w = t = 0.0
        prev = 0
        prev_depart = None
        departures: dict[int, float] = {}
        consistent = True
        first_depart = 0.0
        for v, b in zip(visits, begins):
            if b != b:  # NaN marks a stop with no claimed time
                return False, (0.0, 0.0, 0.0, 0.0)
            if prev_depart is None:
                first_depart = min(b - self.tt[0][v], self.l[0])
                if first_depart < self.e[0] - tol:
                    consistent = False
                arrive = first_depart + self.tt[0][v]
            else:
                arrive = prev_depart + self.tt[prev][v]
            if b < arrive - tol or b < self.e[v] - tol:
                consistent = False
            late = b - self.l[v]
            if late > tol:
                w += late
            if v > self.n:
                ride = b - departures[v - self.n]
                over = ride - self.ride_bound
                if over > tol:
                    t += over
            prev_depart = b + self.srv[v]
            departures[v] = prev_depart
            prev = v
        duration = (prev_depart + self.tt[prev][0]) - first_depart
        d_over = duration - self.duration_bound
        d = d_over if d_over > tol else 0.0
        q_over = self.max_load(visits) - self.capacity
        q = float(q_over) if q_over > 0 else 0.0
        return consistent, (q, d, w, t)

    # -- full report ------------------------------------------------------

    def validate(
        self,
        solution: Solution,
        claimed_cost: float | None = None,
        witness_begins: dict[int, list[float]] | None = None,
        witness_tol: float = 1e-6,
        search: str = "auto",
    ) -> ValidationReport:
        inst = self.instance
        structure: list[str] = []
        disagreements: list[str] = []

        seen_requests: dict[int, int] = {}
        for k, visits in enumerate(solution.visits):
            for v in visits:
                if 1 <= v <= inst.n:
                    if v in seen_requests:
                        structure.append(f"request {v} appears in routes {seen_requests[v]} and {k}")
                    seen_requests[v] = k
        for r in range(1, inst.n + 1):
            in_route = r in seen_requests
            in_unserved = r in solution.unserved
            if in_route and in_unserved:
                structure.append(f"request {r} is both routed and marked unserved")
            if not in_route and not in_unserved:
                structure.append(f"request {r} is neither routed nor marked unserved")

        cost_recomputed = 0.0
        for visits in solution.visits:
            cost_recomputed += self.leg_cost(visits)
        cost_cached = solution.cost
        if abs(cost_recomputed - cost_cached) > COST_TOL:
            disagreements.append(
                f"cached cost {cost_cached!r} differs from leg sum {cost_recomputed!r}"
            )
        if claimed_cost is not None and abs(cost_recomputed - claimed_cost) > COST_TOL:
            disagreements.append(
                f"claimed cost {claimed_cost!r} differs from leg sum {cost_recomputed!r}"
            )

        route_checks: list[RouteCheck] = []
        feasible_fast = True
        feasible_confirmed = True
        for k, visits in enumerate(solution.visits):
            check = RouteCheck(vehicle=k, structural=structure_problems(inst.n, visits))
            route_checks.append(check)
            if check.structural:
                for p in check.structural:
                    structure.append(f"route {k}: {p}")
                feasible_fast = False
                feasible_confirmed = False
                continue

            sched, fv = evaluate_route(inst, visits)
            check.fast = fv.as_tuple()
            fast_ok = check.fast == (0.0, 0.0, 0.0, 0.0)
            feasible_fast = feasible_fast and fast_ok

            check.earliest = self.simulate(visits, self.e[0])
            confirmed = sum(check.earliest) == 0.0

            if witness_begins is not None and k in witness_begins:
                begins = witness_begins[k]
            else:
                begins = list(sched.begin_service[1:-1])
            consistent, wv = self.witness_violations(visits, begins, witness_tol)
            check.witness = wv
            check.witness_consistent = consistent
            if consistent:
                confirmed = confirmed or sum(wv) == 0.0
                if witness_begins is None or k not in witness_begins:
                    # same schedule, independent arithmetic: signs must agree
                    for name, fast_v, wit_v in zip(_COMPONENTS, check.fast, wv):
                        if (fast_v == 0.0) != (wit_v == 0.0):
                            disagreements.append(
                                f"route {k}: {name} sign mismatch "
                                f"(fast {fast_v!r}, witness arithmetic {wit_v!r})"
                            )

            if not confirmed and (search == "always" or search == "auto"):
                found, _ = self.depot_grid_search(visits)
                check.search_feasible = found
                confirmed = confirmed or found

            if fast_ok and not confirmed:
                disagreements.append(
                    f"route {k}: fast evaluator reports a feasible schedule but no "
                    f"independent check could confirm one"
                )
            if not fast_ok and confirmed:
                disagreements.append(
                    f"route {k}: fast evaluator reports violations {check.fast} but an "
                    f"independent violation-free schedule exists"
                )
            check.confirmed_feasible = confirmed
            feasible_confirmed = feasible_confirmed and confirmed

        return ValidationReport(
            structure=structure,
            cost_recomputed=cost_recomputed,
            cost_cached=cost_cached,
            cost_claimed=claimed_cost,
            routes=route_checks,
            disagreements=disagreements,
            feasible_fast=feasible_fast,
            feasible_confirmed=feasible_confirmed,
        )


def validate(
    instance: Instance,
    solution: Solution,
    claimed_cost: float | None = None,
    witness_begins: dict[int, list[float]] | None = None,
    witness_tol: float = 1e-6,
    search: str = "auto",
) -> ValidationReport:
    """One-shot validation; see Validator.validate."""
    return Validator(instance).validate(
        solution, claimed_cost, witness_begins, witness_tol, search
    )


def violations_from_witness(instance: Instance, solution: Solution) -> Violations:
    """Independent violation totals using the evaluator's schedule as witness.

    Every number is re-derived from the begin-service times alone, so a
    fabricated feasible verdict cannot survive this arithmetic. Raises
    AssertionError on a witness that is not physically executable.
    """
    vd = Validator(instance)
    q = d = w = t = 0.0
    for visits in solution.visits:
        if not visits:
            continue
        sched, _ = evaluate_route(instance, visits)
        begins = list(sched.begin_service[1:-1])
        consistent, (qv, dv, wv, tv) = vd.witness_violations(visits, begins, 1e-6)
        if not consistent:
            raise AssertionError(f"inconsistent witness schedule for visits {visits}")
        q += qv
        d += dv
        w += wv
        t += tv
    return Violations(q, d, w, t)
