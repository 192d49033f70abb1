"""Shared test fixtures: instance builders and random generators."""

from __future__ import annotations

import math
import random

import numpy as np

from mata.instance import Instance, Vertex

EPS = 1e-9

TOY_TEXT = """1 2 480 6 90
0 0 0 0 0 0 1000
1 3 0 0 1 0 100
2 6 0 0 -1 0 100
"""


def build_instance(name, m, capacity, duration_bound, ride_bound, vertices, travel=None):
    """Instance from (x, y, service, load, e, l) tuples, depot first.

    travel defaults to exact Euclidean; pass a matrix for gridded tests.
    """
    n = (len(vertices) - 1) // 2
    vs = [Vertex(i, *row) for i, row in enumerate(vertices)]
    if travel is None:
        pts = np.array([[v.x for v in vs], [v.y for v in vs]], dtype=np.float64).T
        diff = pts[:, None, :] - pts[None, :, :]
        travel = np.hypot(diff[..., 0], diff[..., 1])
    else:
        travel = np.asarray(travel, dtype=np.float64)
    return Instance(
        name=name,
        n=n,
        m=m,
        capacity=capacity,
        route_duration_bound=duration_bound,
        ride_time_bound=ride_bound,
        vertices=vs,
        travel_time_matrix=travel,
    )


def toy_instance():
    from mata.instance import parse_instance

    return parse_instance(TOY_TEXT, "toy")


def gridded_instance(rng: random.Random, n_requests: int, m: int = 1) -> Instance:
    """Small integer-valued instance for grid brute-force cross-checks.

    All windows, services, bounds and travel times are integers, so every
    vertex of the schedule polytope is integral and the 0.1-minute grid
    search is exact: a feasible schedule exists iff one exists on the grid.
    """
    horizon = rng.randint(20, 40)

    def window(tight):
        if not tight:
            return 0.0, float(horizon)
        e = rng.randint(0, max(0, horizon - 4))
        return float(e), float(min(horizon, e + rng.randint(2, 8)))

    depot = (float(rng.randint(0, 8)), float(rng.randint(0, 8)), 0.0, 0, 0.0, float(horizon))
    pickups = []
    dropoffs = []
    for _ in range(n_requests):
        load = rng.randint(1, 3)
        mode = rng.randrange(4)  # 0: pickup tight, 1: dropoff tight, 2: both, 3: neither
        pe, pl = window(mode in (0, 2))
        de, dl = window(mode in (1, 2))
        pickups.append(
            (float(rng.randint(0, 8)), float(rng.randint(0, 8)),
             float(rng.randint(1, 3)), load, pe, pl)
        )
        dropoffs.append(
            (float(rng.randint(0, 8)), float(rng.randint(0, 8)),
             float(rng.randint(1, 3)), -load, de, dl)
        )
    vertices = [depot] + pickups + dropoffs

    size = 2 * n_requests + 1
    travel = np.zeros((size, size), dtype=np.float64)
    for i in range(size):
        for j in range(size):
            travel[i, j] = float(
                round(math.hypot(vertices[i][0] - vertices[j][0], vertices[i][1] - vertices[j][1]))
            )
    return build_instance(
        f"grid{n_requests}",
        m=m,
        capacity=rng.randint(2, 4),
        duration_bound=float(rng.randint(max(10, horizon // 2), 2 * horizon)),
        ride_bound=float(rng.randint(8, 25)),
        vertices=vertices,
        travel=travel,
    )


def euclidean_instance(rng: random.Random, n_requests: int, m: int = 1,
                       horizon: float = 200.0) -> Instance:
    """Benchmark-flavored small instance (continuous coordinates)."""
    def window(tight):
        if not tight:
            return 0.0, horizon
        e = rng.uniform(0, horizon * 0.8)
        return e, min(horizon, e + rng.uniform(5, 20))

    depot = (0.0, 0.0, 0.0, 0, 0.0, horizon)
    pickups = []
    dropoffs = []
    for _ in range(n_requests):
        load = rng.randint(1, 2)
        mode = rng.randrange(3)  # pickup tight / dropoff tight / neither
        pe, pl = window(mode == 0)
        de, dl = window(mode == 1)
        pickups.append((rng.uniform(-10, 10), rng.uniform(-10, 10), 10.0, load, pe, pl))
        dropoffs.append((rng.uniform(-10, 10), rng.uniform(-10, 10), 10.0, -load, de, dl))
    return build_instance(
        f"euclid{n_requests}",
        m=m,
        capacity=rng.randint(2, 6),
        duration_bound=rng.uniform(horizon * 0.6, horizon * 1.5),
        ride_bound=rng.uniform(30, 90),
        vertices=[depot] + pickups + dropoffs,
    )


def random_route(rng: random.Random, n: int, max_requests: int = 3) -> list[int]:
    """Random structurally valid route over up to max_requests requests."""
    k = rng.randint(1, min(max_requests, n))
    chosen = rng.sample(range(1, n + 1), k)
    route: list[int] = []
    onboard: list[int] = []
    remaining = list(chosen)
    while remaining or onboard:
        if remaining and (not onboard or rng.random() < 0.5):
            r = remaining.pop(rng.randrange(len(remaining)))
            onboard.append(r)
            route.append(r)
        else:
            r = onboard.pop(rng.randrange(len(onboard)))
            route.append(r + n)
    return route


def feasible_by_construction_instance(rng: random.Random, n_requests: int, m: int,
                                      tight: bool = True) -> Instance:
    """Tiny instance derived from simulating actual routes, so a feasible
    complete solution is guaranteed to exist."""
    # place vertices first
    depot_xy = (rng.uniform(-5, 5), rng.uniform(-5, 5))
    pts = [(rng.uniform(-10, 10), rng.uniform(-10, 10)) for _ in range(2 * n_requests)]
    service = [round(rng.uniform(1, 5), 1) for _ in range(2 * n_requests)]
    loads = [rng.randint(1, 2) for _ in range(n_requests)]

    def dist(a, b):
        return math.hypot(a[0] - b[0], a[1] - b[1])

    # deal the requests to vehicles and simulate each route in request order
    assignment = [rng.randrange(m) for _ in range(n_requests)]
    begins = [0.0] * (2 * n_requests)
    max_ride = 0.0
    max_duration = 0.0
    capacity = max(loads) if loads else 1
    for k in range(m):
        mine = [r for r in range(n_requests) if assignment[r] == k]
        if not mine:
            continue
        route: list[int] = []
        onboard: list[int] = []
        remaining = list(mine)
        while remaining or onboard:
            if remaining and (not onboard or rng.random() < 0.6):
                r = remaining.pop(rng.randrange(len(remaining)))
                onboard.append(r)
                route.append(r)  # 0-based request -> pickup marker
            else:
                r = onboard.pop(rng.randrange(len(onboard)))
                route.append(r + n_requests)
        # capacity actually carried
        running = peak = 0
        for s in route:
            running += loads[s] if s < n_requests else -loads[s - n_requests]
            peak = max(peak, running)
        capacity = max(capacity, peak)
        # simulate with random dwell
        now = rng.uniform(0, 30)
        start = now
        prev = depot_xy
        departed = {}
        for s in route:
            xy = pts[s]
            now += dist(prev, xy) + rng.uniform(0, 5)
            begins[s] = now
            now += service[s]
            if s < n_requests:
                departed[s] = now
            else:
                max_ride = max(max_ride, begins[s] - departed[s - n_requests])
            prev = xy
        now += dist(prev, depot_xy)
        max_duration = max(max_duration, now - start)

    horizon = max(max_duration, max(begins) if begins else 0.0) + 100.0
    width = rng.uniform(3, 15) if tight else horizon
    vertices = [(depot_xy[0], depot_xy[1], 0.0, 0, 0.0, horizon)]
    for i in range(n_requests):
        b = begins[i]
        vertices.append(
            (pts[i][0], pts[i][1], service[i], loads[i],
             max(0.0, b - rng.uniform(0, width)), min(horizon, b + rng.uniform(1, width)))
        )
    for i in range(n_requests, 2 * n_requests):
        b = begins[i]
        vertices.append(
            (pts[i][0], pts[i][1], service[i], -loads[i - n_requests],
             max(0.0, b - rng.uniform(0, width)), min(horizon, b + rng.uniform(1, width)))
        )
    return build_instance(
        f"tiny{n_requests}x{m}",
        m=m,
        capacity=capacity,
        duration_bound=max_duration + rng.uniform(5, 50),
        ride_bound=max(max_ride + rng.uniform(5, 30), 10.0),
        vertices=vertices,
    )
