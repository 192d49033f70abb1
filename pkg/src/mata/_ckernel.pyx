# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled scheduling kernel.

Operation-for-operation mirror of _pykernel (same arithmetic in the same
order, no fast-math), so both backends return bitwise identical costs,
schedules and verdicts. See _pykernel for the algorithm documentation.
"""

from libc.stdlib cimport free, malloc

import numpy as np

BACKEND_NAME = "compiled"

OK = 0
STRUCTURE = 1
CAPACITY = 2
WINDOW = 3
RIDE_OR_DURATION = 4

cdef double INF = float("inf")
cdef double EPS = 1e-9

cdef int C_OK = 0
cdef int C_CAPACITY = 2
cdef int C_WINDOW = 3
cdef int C_RIDE_OR_DURATION = 4


cdef class Kernel:
    cdef readonly int n
    cdef readonly int capacity
    cdef readonly double duration_bound
    cdef readonly double ride_bound
    cdef double[::1] e
    cdef double[::1] l
    cdef double[::1] srv
    cdef long long[::1] load
    cdef double[:, ::1] tt
    # workspaces sized for the longest possible route (2n visits + depots)
    cdef int size
    cdef int* vert
    cdef int* partner
    cdef int* pos_of
    cdef int* base_partner
    cdef int* base
    cdef int* rank
    cdef double* A
    cdef double* B
    cdef double* W
    cdef double* D
    cdef double* deltas

    @property
    def backend(self):
        return BACKEND_NAME

    def __cinit__(self, n, capacity, duration_bound, ride_bound,
                  window_open, window_close, service, load, travel):
        self.n = int(n)
        self.capacity = int(capacity)
        self.duration_bound = float(duration_bound)
        self.ride_bound = float(ride_bound)
        self.e = np.ascontiguousarray(window_open, dtype=np.float64)
        self.l = np.ascontiguousarray(window_close, dtype=np.float64)
        self.srv = np.ascontiguousarray(service, dtype=np.float64)
        self.load = np.ascontiguousarray(load, dtype=np.int64)
        self.tt = np.ascontiguousarray(travel, dtype=np.float64)
        self.size = 2 * self.n + 4
        self.vert = <int*> malloc(self.size * sizeof(int))
        self.partner = <int*> malloc(self.size * sizeof(int))
        self.pos_of = <int*> malloc((2 * self.n + 1) * sizeof(int))
        self.base_partner = <int*> malloc(self.size * sizeof(int))
        self.base = <int*> malloc(self.size * sizeof(int))
        self.rank = <int*> malloc(self.size * sizeof(int))
        self.A = <double*> malloc(self.size * sizeof(double))
        self.B = <double*> malloc(self.size * sizeof(double))
        self.W = <double*> malloc(self.size * sizeof(double))
        self.D = <double*> malloc(self.size * sizeof(double))
        self.deltas = <double*> malloc(self.size * sizeof(double))
        if (self.vert == NULL or self.partner == NULL or self.pos_of == NULL
                or self.base_partner == NULL or self.base == NULL
                or self.rank == NULL or self.A == NULL or self.B == NULL
                or self.W == NULL or self.D == NULL or self.deltas == NULL):
            raise MemoryError()

    def __dealloc__(self):
        free(self.vert)
        free(self.partner)
        free(self.pos_of)
        free(self.base_partner)
        free(self.base)
        free(self.rank)
        free(self.A)
        free(self.B)
        free(self.W)
        free(self.D)
        free(self.deltas)

    # ------------------------------------------------------------------
    # basic quantities
    # ------------------------------------------------------------------

    def route_cost(self, route) -> float:
        """Travel time along depot -> visits -> depot (left-to-right sum)."""
        cdef Py_ssize_t q = len(route)
        cdef Py_ssize_t i
        cdef int prev = 0
        cdef int v
        cdef double c = 0.0
        for i in range(q):
            v = route[i]
            c += self.tt[prev, v]
            prev = v
        return c + self.tt[prev, 0]

    cdef double _cost_c(self, int q) noexcept:
        """Cost of the route currently loaded in vert[1..q]."""
        cdef double c = 0.0
        cdef int prev = 0
        cdef int i, v
        for i in range(1, q + 1):
            v = self.vert[i]
            c += self.tt[prev, v]
            prev = v
        return c + self.tt[prev, 0]

    cdef int _setup(self, route) except -2:
        """Load route into vert/partner; returns q, or -1 on bad structure."""
        cdef int n = self.n
        cdef Py_ssize_t q = len(route)
        cdef Py_ssize_t i
        cdef int v, p
        if q + 2 > self.size:
            return -1
        for i in range(2 * n + 1):
            self.pos_of[i] = 0
        self.vert[0] = 0
        self.vert[q + 1] = 0
        self.partner[0] = -1
        self.partner[q + 1] = -1
        for i in range(q):
            v = route[i]
            if v < 1 or v > 2 * n or self.pos_of[v] != 0:
                return -1
            self.vert[i + 1] = v
            self.partner[i + 1] = -1
            self.pos_of[v] = <int> i + 1
        for i in range(1, q + 1):
            v = self.vert[i]
            if v > n:
                p = self.pos_of[v - n]
                if p == 0 or p > i:
                    return -1
                self.partner[i] = p
            elif self.pos_of[v + n] == 0:
                return -1
        return <int> q

    cdef int _max_load_c(self, int q) noexcept:
        cdef int running = 0
        cdef int worst = 0
        cdef int i
        for i in range(1, q + 1):
            running += <int> self.load[self.vert[i]]
            if running > worst:
                worst = running
        return worst

    # ------------------------------------------------------------------
    # eight-step scheduling (mirrors _pykernel exactly)
    # ------------------------------------------------------------------

    cdef void _forward_c(self, int q, int start) noexcept:
        cdef double prev_d = self.D[start - 1]
        cdef int prev_v = self.vert[start - 1]
        cdef int i, v
        cdef double a, ev, b
        for i in range(start, q + 2):
            v = self.vert[i]
            a = prev_d + self.tt[prev_v, v]
            ev = self.e[v]
            b = ev if ev > a else a
            self.A[i] = a
            self.B[i] = b
            self.W[i] = b - a
            prev_d = b + self.srv[v]
            self.D[i] = prev_d
            prev_v = v

    cdef double _slack_c(self, int i, int q) noexcept:
        cdef int n = self.n
        cdef double best = INF
        cdef double cumw = 0.0
        cdef int k, v
        cdef double cap, c2, term
        for k in range(i, q + 2):
            if k > i:
                cumw += self.W[k]
            v = self.vert[k]
            cap = self.l[v] - self.B[k]
            if 1 <= k <= q and v > n and self.partner[k] < i:
                c2 = self.ride_bound - (self.B[k] - self.D[self.partner[k]])
                if c2 < cap:
                    cap = c2
            if cap < 0.0:
                cap = 0.0
            term = cumw + cap
            if term < best:
                best = term
        return best

    cdef void _schedule_c(self, int q) noexcept:
        cdef double e0 = self.e[0]
        cdef double f0, sumw, delay, d0, fj, down, add
        cdef int i, j
        self.A[0] = e0
        self.B[0] = e0
        self.D[0] = e0
        self.W[0] = 0.0
        self._forward_c(q, 1)

        f0 = self._slack_c(0, q)
        sumw = 0.0
        for i in range(1, q + 1):
            sumw += self.W[i]
        delay = f0 if f0 < sumw else sumw
        if delay > 0.0:
            d0 = e0 + delay
            self.A[0] = d0
            self.B[0] = d0
            self.D[0] = d0
            self._forward_c(q, 1)

        for j in range(1, q + 1):
            if self.vert[j] <= self.n:
                fj = self._slack_c(j, q)
                down = 0.0
                for i in range(j + 1, q + 1):
                    down += self.W[i]
                add = fj if fj < down else down
                if add > 0.0:
                    self.W[j] += add
                    self.B[j] += add
                    self.D[j] = self.B[j] + self.srv[self.vert[j]]
                    self._forward_c(q, j + 1)

    cdef (double, double) _violations_c(self, int q) noexcept:
        cdef double w = 0.0
        cdef double t = 0.0
        cdef double x
        cdef int i
        for i in range(1, q + 1):
            x = self.B[i] - self.l[self.vert[i]]
            if x > EPS:
                w += x
            if self.partner[i] >= 0:
                x = (self.B[i] - self.D[self.partner[i]]) - self.ride_bound
                if x > EPS:
                    t += x
        return w, t

    # ------------------------------------------------------------------
    # public evaluation entry points
    # ------------------------------------------------------------------

    def evaluate(self, route):
        """Same contract as the pure kernel's evaluate()."""
        cdef int q = self._setup(route)
        if q < 0:
            return (STRUCTURE, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, [], [], [], [], [])
        self._schedule_c(q)
        cdef double w, t
        w, t = self._violations_c(q)
        cdef double duration = self.A[q + 1] - self.D[0]
        cdef double d_excess = duration - self.duration_bound
        cdef double d = d_excess if d_excess > EPS else 0.0
        cdef int max_load = self._max_load_c(q)
        cdef double q_excess = <double> (max_load - self.capacity)
        cdef double qv = q_excess if q_excess > 0.0 else 0.0
        cdef int i
        rides = []
        for i in range(1, q + 1):
            if self.partner[i] >= 0:
                rides.append((self.vert[i] - self.n, self.B[i] - self.D[self.partner[i]]))
        A = [self.A[i] for i in range(q + 2)]
        B = [self.B[i] for i in range(q + 2)]
        W = [self.W[i] for i in range(q + 2)]
        D = [self.D[i] for i in range(q + 2)]
        cdef double cost = self._cost_c(q)
        return (OK, cost, duration, max_load, qv, d, w, t, A, B, W, D, rides)

    cdef int _candidate_status_c(self, int q, int* first_pos) noexcept:
        """Feasibility of the route loaded in vert/partner (length q)."""
        first_pos[0] = 0
        if self._max_load_c(q) > self.capacity:
            return C_CAPACITY

        cdef double e0 = self.e[0]
        cdef double prev_d = e0
        cdef int prev_v = 0
        cdef int i, j, v
        cdef double a, ev, b
        self.A[0] = e0
        self.B[0] = e0
        self.D[0] = e0
        self.W[0] = 0.0
        for i in range(1, q + 2):
            v = self.vert[i]
            a = prev_d + self.tt[prev_v, v]
            ev = self.e[v]
            b = ev if ev > a else a
            if i <= q and b - self.l[v] > EPS:
                first_pos[0] = i
                return C_WINDOW
            self.A[i] = a
            self.B[i] = b
            self.W[i] = b - a
            prev_d = b + self.srv[v]
            self.D[i] = prev_d
            prev_v = v

        cdef double f0 = self._slack_c(0, q)
        cdef double sumw = 0.0
        for i in range(1, q + 1):
            sumw += self.W[i]
        cdef double delay = f0 if f0 < sumw else sumw
        cdef double d0
        if delay > 0.0:
            d0 = e0 + delay
            self.A[0] = d0
            self.B[0] = d0
            self.D[0] = d0
            self._forward_c(q, 1)
        cdef double fj, down, add
        for j in range(1, q + 1):
            if self.vert[j] <= self.n:
                fj = self._slack_c(j, q)
                down = 0.0
                for i in range(j + 1, q + 1):
                    down += self.W[i]
                add = fj if fj < down else down
                if add > 0.0:
                    self.W[j] += add
                    self.B[j] += add
                    self.D[j] = self.B[j] + self.srv[self.vert[j]]
                    self._forward_c(q, j + 1)

        cdef double w, t
        w, t = self._violations_c(q)
        if w > 0.0:
            return C_WINDOW
        cdef double duration = self.A[q + 1] - self.D[0]
        if t > 0.0 or duration - self.duration_bound > EPS:
            return C_RIDE_OR_DURATION
        return C_OK

    def feasible(self, route) -> bool:
        """Zero-violation verdict (capacity, windows, ride times, duration)."""
        cdef int q = self._setup(route)
        if q < 0:
            return False
        cdef int pos
        return self._candidate_status_c(q, &pos) == C_OK

    # ------------------------------------------------------------------
    # insertion scan
    # ------------------------------------------------------------------

    def check_insertion(self, route, pickup):
        """Same contract as the pure kernel's check_insertion()."""
        cdef int n = self.n
        cdef int pk = pickup
        cdef int dropoff = pk + n
        cdef int q0 = <int> len(route)
        cdef int q = q0 + 2
        cdef int i, idx, v, p, dpos, prev, nxt, bp, di, pi, pos, status, best_dpos
        cdef double base_cost, dlt, best_cost, c

        if q + 2 > self.size:
            return None

        for i in range(2 * n + 1):
            self.pos_of[i] = -1
        for i in range(q0):
            v = route[i]
            self.base[i] = v
            self.pos_of[v] = i
        for i in range(q0):
            v = self.base[i]
            self.base_partner[i] = self.pos_of[v - n] if v > n else -1

        base_cost = 0.0
        prev = 0
        for i in range(q0):
            v = self.base[i]
            base_cost += self.tt[prev, v]
            prev = v
        base_cost += self.tt[prev, 0]

        # detour delta per pickup position, ranked by (delta, position)
        for p in range(q0 + 1):
            prev = self.base[p - 1] if p > 0 else 0
            nxt = self.base[p] if p < q0 else 0
            self.deltas[p] = self.tt[prev, pk] + self.tt[pk, nxt] - self.tt[prev, nxt]
            self.rank[p] = p
        for i in range(1, q0 + 1):
            p = self.rank[i]
            dlt = self.deltas[p]
            pos = i - 1
            while pos >= 0 and (self.deltas[self.rank[pos]] > dlt or
                                (self.deltas[self.rank[pos]] == dlt and self.rank[pos] > p)):
                self.rank[pos + 1] = self.rank[pos]
                pos -= 1
            self.rank[pos + 1] = p

        for i in range(q0 + 1):
            p = self.rank[i]
            best_cost = INF
            best_dpos = -1
            for dpos in range(p + 1, q0 + 2):
                # candidate = base[:p] + [pickup] + base[p:dpos-1] + [dropoff] + base[dpos-1:]
                self.vert[0] = 0
                self.vert[q + 1] = 0
                for idx in range(p):
                    self.vert[idx + 1] = self.base[idx]
                    self.partner[idx + 1] = -1
                self.vert[p + 1] = pk
                self.partner[p + 1] = -1
                for idx in range(p, dpos - 1):
                    self.vert[idx + 2] = self.base[idx]
                    self.partner[idx + 2] = -1
                self.vert[dpos + 1] = dropoff
                self.partner[dpos + 1] = p + 1
                for idx in range(dpos - 1, q0):
                    self.vert[idx + 3] = self.base[idx]
                    self.partner[idx + 3] = -1
                for idx in range(q0):
                    bp = self.base_partner[idx]
                    if bp >= 0:
                        di = idx + (1 if idx >= p else 0) + (1 if idx >= dpos - 1 else 0)
                        pi = bp + (1 if bp >= p else 0) + (1 if bp >= dpos - 1 else 0)
                        self.partner[di + 1] = pi + 1
                status = self._candidate_status_c(q, &pos)
                if status == C_CAPACITY:
                    break
                if status == C_WINDOW and 0 < pos <= p + 1:
                    break
                if status == C_OK:
                    c = self._cost_c(q) - base_cost
                    if c < best_cost:
                        best_cost = c
                        best_dpos = dpos
            if best_dpos >= 0:
                return (p, best_dpos, best_cost)
        return None
