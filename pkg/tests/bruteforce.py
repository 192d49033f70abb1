"""Grid brute-force schedule search, independent of the package kernel.

Feasibility of a fixed visit order is decided by exhaustive search over
depot departures and per-pickup added waits on a 0.1-minute grid. Waiting
at dropoffs is never useful (it can only raise that passenger's ride time
and push everything later). Waits past the point where every downstream
begin is arrival-driven are dominated, which caps each enumeration range;
on integer-valued instances the capped grid search is exact.

Implemented as an iterative DFS (explicit stack over the depot and the
pickups); numba accelerates it when available, the pure path is identical.
Backtracking exhausts a frame outright when the failure is monotone in the
frame's wait (window lateness, duration, or the ride of a passenger picked
up at an outer frame), and retries the next wait step otherwise.
"""

from __future__ import annotations

import numpy as np

EPS = 1e-9
GRID = 0.1

try:
    from numba import njit
except ImportError:  # pragma: no cover - numba is in the test extras
    def njit(*args, **kwargs):
        def wrap(fn):
            return fn
        return wrap if not (args and callable(args[0])) else args[0]


@njit(cache=True)
def _search(route, n, e, l, srv, load, tt, capacity, ride_bound, t_bound):
    q = route.shape[0]
    running = 0
    for i in range(q):
        running += load[route[i]]
        if running > capacity:
            return False
    if q == 0:
        return True

    # suffix maxima of window opens: added waiting beyond them is dominated
    suf_e = np.zeros(q + 1)
    for i in range(q - 1, -1, -1):
        x = e[route[i]]
        suf_e[i] = x if x > suf_e[i + 1] else suf_e[i + 1]

    pick_depart = np.full(n + 1, -1.0)

    # stack frames: one for the depot (position -1) plus one per pickup
    cap_frames = q + 2
    f_pos = np.zeros(cap_frames, dtype=np.int64)
    f_begin0 = np.zeros(cap_frames)
    f_steps = np.zeros(cap_frames, dtype=np.int64)
    f_k = np.zeros(cap_frames, dtype=np.int64)

    hi = suf_e[0]
    if hi > l[0]:
        hi = l[0]
    if hi < e[0]:
        hi = e[0]
    f_pos[0] = -1
    f_begin0[0] = e[0]
    f_steps[0] = int((hi - e[0]) / GRID + EPS)
    f_k[0] = 0
    top = 0

    while top >= 0:
        if f_k[top] > f_steps[top]:
            top -= 1
            if top >= 0:
                f_k[top] += 1
            continue
        pos = f_pos[top]
        begin = f_begin0[top] + f_k[top] * GRID
        if pos == -1:
            depart = begin
            prev = 0
        else:
            v0 = route[pos]
            if begin > l[v0] + EPS:
                f_k[top] = f_steps[top] + 1
                continue
            pick_depart[v0] = begin + srv[v0]
            depart = begin + srv[v0]
            prev = v0
        start = f_begin0[0] + f_k[0] * GRID

        walk = pos + 1
        verdict = 0  # 0 walk completed, 1 retry next wait, 2 exhaust frame
        pushed = False
        while walk < q:
            v = route[walk]
            arrive = depart + tt[prev, v]
            b = arrive if arrive > e[v] else e[v]
            if b > l[v] + EPS:
                verdict = 2  # lateness only grows with more waiting
                break
            if v > n:
                ride = b - pick_depart[v - n]
                if ride > ride_bound + EPS:
                    # more waiting helps only the top frame's own passenger
                    verdict = 1 if (pos >= 0 and v - n == route[pos]) else 2
                    break
                depart = b + srv[v]
                prev = v
                walk += 1
            else:
                cap = l[v] - b
                dom = suf_e[walk + 1] - b
                if dom < 0.0:
                    dom = 0.0
                if dom < cap:
                    cap = dom
                top += 1
                f_pos[top] = walk
                f_begin0[top] = b
                f_steps[top] = int(cap / GRID + EPS)
                f_k[top] = 0
                pushed = True
                break
        if pushed:
            continue
        if verdict == 0:
            duration = (depart + tt[prev, 0]) - start
            if duration <= t_bound + EPS:
                return True
            verdict = 2  # duration only grows with more waiting
        if verdict == 2:
            f_k[top] = f_steps[top] + 1
        else:
            f_k[top] += 1
    return False


def brute_force_schedule_feasible(instance, route) -> bool:
    """True iff some 0.1-grid schedule of the visit order has no violation."""
    return bool(
        _search(
            np.asarray(route, dtype=np.int64),
            instance.n,
            instance.window_open_arr,
            instance.window_close_arr,
            instance.service_arr,
            instance.load_arr,
            np.ascontiguousarray(instance.travel_time_matrix),
            instance.capacity,
            instance.ride_time_bound,
            instance.route_duration_bound,
        )
    )
