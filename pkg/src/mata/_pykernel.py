"""Pure-Python scheduling kernel (fallback twin of the compiled extension).

Both kernels implement the classical eight-step route evaluation for the
dial-a-ride constraint set: start as early as possible, delay the depot
departure by the depot's forward time slack, then sweep the pickups in route
order and convert downstream waiting into pickup waits wherever the slack
allows, which minimizes time-window and ride-time violations for the fixed
visit order. The compiled kernel mirrors this module operation for
operation (same arithmetic, same order), so both backends produce bitwise
identical schedules, costs and verdicts.

Routes are sequences of user vertex ids (1..2n); the depot legs are
implicit. All entry points are pure functions of (kernel arrays, route).
"""

from __future__ import annotations

INF = float("inf")
EPS = 1e-9

BACKEND_NAME = "pure"

# evaluate()/feasibility status codes
OK = 0
STRUCTURE = 1
CAPACITY = 2
WINDOW = 3
RIDE_OR_DURATION = 4


class Kernel:
    backend = "pure"

    def __init__(self, n, capacity, duration_bound, ride_bound,
                 window_open, window_close, service, load, travel):
        self.n = int(n)
        self.capacity = int(capacity)
        self.duration_bound = float(duration_bound)
        self.ride_bound = float(ride_bound)
        self.e = [float(v) for v in window_open]
        self.l = [float(v) for v in window_close]
        self.srv = [float(v) for v in service]
        self.load = [int(v) for v in load]
        self.tt = [[float(x) for x in row] for row in travel]

    # ------------------------------------------------------------------
    # basic quantities
    # ------------------------------------------------------------------

    def route_cost(self, route) -> float:
        """Travel time along depot -> visits -> depot (left-to-right sum)."""
        tt = self.tt
        c = 0.0
        prev = 0
        for v in route:
            c += tt[prev][v]
            prev = v
        return c + tt[prev][0]

    def _setup(self, route):
        """Vertex/partner position tables; None when structure is invalid."""
        n = self.n
        q = len(route)
        vert = [0] * (q + 2)
        partner = [-1] * (q + 2)
        pos_of = {}
        for i, v in enumerate(route, start=1):
            if v < 1 or v > 2 * n or v in pos_of:
                return None
            vert[i] = v
            pos_of[v] = i
        for i, v in enumerate(route, start=1):
            if v > n:
                p = pos_of.get(v - n)
                if p is None or p > i:
                    return None
                partner[i] = p
            elif (v + n) not in pos_of:
                return None
        return q, vert, partner

    def _max_load(self, route) -> int:
        load = self.load
        running = 0
        worst = 0
        for v in route:
            running += load[v]
            if running > worst:
                worst = running
        return worst

    # ------------------------------------------------------------------
    # eight-step scheduling
    # ------------------------------------------------------------------

    def _forward(self, vert, q, A, B, W, D, start):
        """Earliest-begin pass from position `start`; D[start-1] must be set."""
        e = self.e
        srv = self.srv
        tt = self.tt
        prev_d = D[start - 1]
        prev_v = vert[start - 1]
        for i in range(start, q + 2):
            v = vert[i]
            a = prev_d + tt[prev_v][v]
            ev = e[v]
            b = ev if ev > a else a
            A[i] = a
            B[i] = b
            W[i] = b - a
            prev_d = b + srv[v]
            D[i] = prev_d
            prev_v = v

    def _slack(self, i, q, vert, partner, B, W, D):
        """Forward time slack at position i.

        Each downstream visit caps the delay by its accumulated waiting plus
        its window slack; a dropoff whose passenger is already aboard at i
        (pickup strictly before i) additionally caps it by that passenger's
        remaining ride-time allowance. Rides of passengers picked up at or
        after i can only shrink under the delay, so they impose no cap;
        capping them anyway provably misses feasible schedules (it blocks
        depot delays that repair duration violations).
        """
        n = self.n
        l = self.l
        ride_bound = self.ride_bound
        best = INF
        cumw = 0.0
        for k in range(i, q + 2):
            if k > i:
                cumw += W[k]
            v = vert[k]
            cap = l[v] - B[k]
            if 1 <= k <= q and v > n and partner[k] < i:
                c2 = ride_bound - (B[k] - D[partner[k]])
                if c2 < cap:
                    cap = c2
            if cap < 0.0:
                cap = 0.0
            term = cumw + cap
            if term < best:
                best = term
        return best

    def _schedule(self, q, vert, partner, A, B, W, D):
        """Run the delay/wait placement (steps 1-7) in place; arrays length q+2."""
        e0 = self.e[0]
        srv = self.srv
        A[0] = B[0] = D[0] = e0
        W[0] = 0.0
        self._forward(vert, q, A, B, W, D, 1)

        f0 = self._slack(0, q, vert, partner, B, W, D)
        sumw = 0.0
        for i in range(1, q + 1):
            sumw += W[i]
        delay = f0 if f0 < sumw else sumw
        if delay > 0.0:
            d0 = e0 + delay
            A[0] = B[0] = D[0] = d0
            self._forward(vert, q, A, B, W, D, 1)

        n = self.n
        for j in range(1, q + 1):
            if vert[j] <= n:
                fj = self._slack(j, q, vert, partner, B, W, D)
                down = 0.0
                for i in range(j + 1, q + 1):
                    down += W[i]
                add = fj if fj < down else down
                if add > 0.0:
                    W[j] += add
                    B[j] += add
                    D[j] = B[j] + srv[vert[j]]
                    self._forward(vert, q, A, B, W, D, j + 1)

    def _violations(self, q, vert, partner, B, D):
        l = self.l
        ride_bound = self.ride_bound
        w = 0.0
        t = 0.0
        for i in range(1, q + 1):
            x = B[i] - l[vert[i]]
            if x > EPS:
                w += x
            if partner[i] >= 0:
                x = (B[i] - D[partner[i]]) - ride_bound
                if x > EPS:
                    t += x
        return w, t

    # ------------------------------------------------------------------
    # public evaluation entry points
    # ------------------------------------------------------------------

    def evaluate(self, route):
        """Full evaluation: schedule plus the route's violation contribution.

        Returns (status, cost, duration, max_load, q_viol, d_viol, w_viol,
        t_viol, A, B, W, D, rides) where the arrays cover positions 0..q+1
        (depot start/end included) and rides lists (request, ride_time) in
        route order. status != OK means the route structure is invalid and
        only status is meaningful.
        """
        setup = self._setup(route)
        if setup is None:
            return (STRUCTURE,) + (0.0,) * 7 + ([], [], [], [], [])
        q, vert, partner = setup
        size = q + 2
        A = [0.0] * size
        B = [0.0] * size
        W = [0.0] * size
        D = [0.0] * size
        self._schedule(q, vert, partner, A, B, W, D)
        w, t = self._violations(q, vert, partner, B, D)
        duration = A[q + 1] - D[0]
        d_excess = duration - self.duration_bound
        d = d_excess if d_excess > EPS else 0.0
        max_load = self._max_load(route)
        q_excess = float(max_load - self.capacity)
        qv = q_excess if q_excess > 0.0 else 0.0
        rides = [
            (vert[i] - self.n, B[i] - D[partner[i]])
            for i in range(1, q + 1)
            if partner[i] >= 0
        ]
        cost = self.route_cost(route)
        return (OK, cost, duration, max_load, qv, d, w, t, A, B, W, D, rides)

    def _candidate_status(self, cand, q, vert, partner, A, B, W, D):
        """Feasibility verdict for a structurally valid candidate route.

        Returns (status, pos) with pos the first late position for WINDOW
        failures detected in the earliest pass (0 otherwise). Early exits
        are sound: neither a capacity excess nor an earliest-schedule window
        breach can be repaired by added waiting.
        """
        if self._max_load(cand) > self.capacity:
            return CAPACITY, 0

        e = self.e
        l = self.l
        srv = self.srv
        tt = self.tt
        e0 = e[0]
        A[0] = B[0] = D[0] = e0
        W[0] = 0.0
        prev_d = e0
        prev_v = 0
        for i in range(1, q + 2):
            v = vert[i]
            a = prev_d + tt[prev_v][v]
            ev = e[v]
            b = ev if ev > a else a
            if i <= q and b - l[v] > EPS:
                return WINDOW, i
            A[i] = a
            B[i] = b
            W[i] = b - a
            prev_d = b + srv[v]
            D[i] = prev_d
            prev_v = v

        f0 = self._slack(0, q, vert, partner, B, W, D)
        sumw = 0.0
        for i in range(1, q + 1):
            sumw += W[i]
        delay = f0 if f0 < sumw else sumw
        if delay > 0.0:
            d0 = e0 + delay
            A[0] = B[0] = D[0] = d0
            self._forward(vert, q, A, B, W, D, 1)
        n = self.n
        for j in range(1, q + 1):
            if vert[j] <= n:
                fj = self._slack(j, q, vert, partner, B, W, D)
                down = 0.0
                for i in range(j + 1, q + 1):
                    down += W[i]
                add = fj if fj < down else down
                if add > 0.0:
                    W[j] += add
                    B[j] += add
                    D[j] = B[j] + srv[vert[j]]
                    self._forward(vert, q, A, B, W, D, j + 1)

        w, t = self._violations(q, vert, partner, B, D)
        if w > 0.0:
            return WINDOW, 0
        duration = A[q + 1] - D[0]
        if t > 0.0 or duration - self.duration_bound > EPS:
            return RIDE_OR_DURATION, 0
        return OK, 0

    def feasible(self, route) -> bool:
        """Zero-violation verdict (capacity, windows, ride times, duration)."""
        setup = self._setup(route)
        if setup is None:
            return False
        q, vert, partner = setup
        size = q + 2
        A = [0.0] * size
        B = [0.0] * size
        W = [0.0] * size
        D = [0.0] * size
        status, _ = self._candidate_status(route, q, vert, partner, A, B, W, D)
        return status == OK

    # ------------------------------------------------------------------
    # insertion scan
    # ------------------------------------------------------------------

    def check_insertion(self, route, pickup):
        """Best feasible placement of `pickup` and its dropoff in the route.

        Two-step scan: pickup positions are ranked by travel detour
        (neighborhood reduction); the best-ranked position that admits any
        feasible dropoff placement wins and contributes its cheapest
        feasible dropoff position. Returns (pickup_pos, dropoff_pos,
        cost_increase) or None; positions index the final q+2-visit route.
        """
        n = self.n
        dropoff = pickup + n
        q0 = len(route)
        tt = self.tt
        base_cost = self.route_cost(route)

        pos_of = {}
        for i, v in enumerate(route):
            pos_of[v] = i
        base_partner = [pos_of[v - n] if v > n else -1 for v in route]

        ranked = []
        for p in range(q0 + 1):
            prev = route[p - 1] if p > 0 else 0
            nxt = route[p] if p < q0 else 0
            ranked.append((tt[prev][pickup] + tt[pickup][nxt] - tt[prev][nxt], p))
        ranked.sort()

        q = q0 + 2
        size = q + 2
        A = [0.0] * size
        B = [0.0] * size
        W = [0.0] * size
        D = [0.0] * size
        vert = [0] * size
        partner = [-1] * size
        cand = [0] * q

        for _, p in ranked:
            best_cost = INF
            best_dpos = -1
            for dpos in range(p + 1, q0 + 2):
                # candidate = route[:p] + [pickup] + route[p:dpos-1] + [dropoff] + route[dpos-1:]
                for i in range(p):
                    cand[i] = route[i]
                cand[p] = pickup
                for i in range(p, dpos - 1):
                    cand[i + 1] = route[i]
                cand[dpos] = dropoff
                for i in range(dpos - 1, q0):
                    cand[i + 2] = route[i]
                vert[q + 1] = 0
                for i in range(q):
                    vert[i + 1] = cand[i]
                    partner[i + 1] = -1
                partner[dpos + 1] = p + 1
                for i in range(q0):
                    bp = base_partner[i]
                    if bp >= 0:
                        di = i + (1 if i >= p else 0) + (1 if i >= dpos - 1 else 0)
                        pi = bp + (1 if bp >= p else 0) + (1 if bp >= dpos - 1 else 0)
                        partner[di + 1] = pi + 1
                status, pos = self._candidate_status(cand, q, vert, partner, A, B, W, D)
                if status == CAPACITY:
                    # the onboard segment only grows with later dropoffs
                    break
                if status == WINDOW and 0 < pos <= p + 1:
                    # late at or before the pickup: no dropoff position can help
                    break
                if status == OK:
                    c = self.route_cost(cand) - base_cost
                    if c < best_cost:
                        best_cost = c
                        best_dpos = dpos
            if best_dpos >= 0:
                return (p, best_dpos, best_cost)
        return None
