"""Dial-a-ride instance model: parsing, validation, time-window tightening.

Instances follow the classic benchmark text format:

    m  V  T  Q  L
    id  x  y  d  q  e  l        (one line per vertex, depot id 0 first)

where V = 2n is the number of non-depot vertices, T the route duration
bound, Q the vehicle capacity and L the passenger ride-time bound. Vertices
1..n are pickups, n+1..2n the matching dropoffs. Travel time between two
vertices is the planar Euclidean distance (coordinates are in minutes of
travel), kept at full double precision. A trailing line duplicating the
depot is tolerated and ignored.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

import numpy as np

EPS = 1e-9


class ParseError(ValueError):
    """Malformed instance text; carries the 1-based offending line number."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class InfeasibleRequestError(ValueError):
    """A request whose tightened time windows are empty (inherently unservable)."""

    def __init__(self, requests: list[int]):
        self.requests = requests
        super().__init__(
            "time-window tightening produced an empty window for request(s) "
            + ", ".join(map(str, requests))
        )


@dataclass(frozen=True)
class Vertex:
    """One service location. id 0 is the depot, 1..n pickups, n+1..2n dropoffs."""

    id: int
    x: float
    y: float
    service_duration: float
    load_change: int
    window_open: float
    window_close: float


@dataclass(frozen=True)
class Request:
    """A pickup/dropoff pair; sort_key is window_close(pickup) + window_open(dropoff)."""

    index: int
    pickup: int
    dropoff: int
    sort_key: float


@dataclass
class Instance:
    """Immutable problem description shared by all solver components.

    Capacity and the duration bound are scalars: the benchmark fleets are
    homogeneous. (Per-vehicle bounds would generalize the model but no
    instance in this format encodes them.)
    """

    name: str
    n: int
    m: int
    capacity: int
    route_duration_bound: float
    ride_time_bound: float
    vertices: list[Vertex]
    travel_time_matrix: np.ndarray = field(repr=False)

    def __post_init__(self):
        if self.capacity <= 0 or self.ride_time_bound <= 0 or self.route_duration_bound <= 0:
            raise ValueError("capacity, ride time bound and duration bound must be positive")
        if len(self.vertices) != 2 * self.n + 1:
            raise ValueError(f"expected {2 * self.n + 1} vertices, got {len(self.vertices)}")

    @cached_property
    def requests(self) -> list[Request]:
        return [
            Request(
                index=i,
                pickup=i,
                dropoff=i + self.n,
                sort_key=self.vertices[i].window_close + self.vertices[i + self.n].window_open,
            )
            for i in range(1, self.n + 1)
        ]

    @cached_property
    def horizon(self) -> float:
        """Planning horizon: the width of the depot time window."""
        return self.vertices[0].window_close - self.vertices[0].window_open

    # Flat per-vertex arrays consumed by the scheduling kernel.
    @cached_property
    def window_open_arr(self) -> np.ndarray:
        return np.array([v.window_open for v in self.vertices], dtype=np.float64)

    @cached_property
    def window_close_arr(self) -> np.ndarray:
        return np.array([v.window_close for v in self.vertices], dtype=np.float64)

    @cached_property
    def service_arr(self) -> np.ndarray:
        return np.array([v.service_duration for v in self.vertices], dtype=np.float64)

    @cached_property
    def load_arr(self) -> np.ndarray:
        return np.array([v.load_change for v in self.vertices], dtype=np.int64)

    @cached_property
    def kernel(self):
        """Scheduling kernel bound to this instance's arrays (compiled or pure)."""
        from . import kernel as _kernel

        return _kernel.make_kernel(self)


def travel_time(instance: Instance, i: int, j: int) -> float:
    """Travel time between vertices i and j (precomputed Euclidean distance)."""
    size = 2 * instance.n + 1
    if not (0 <= i < size and 0 <= j < size):
        raise IndexError(f"vertex id out of range: ({i}, {j}), instance has 0..{size - 1}")
    return float(instance.travel_time_matrix[i, j])


def _euclidean_matrix(xs: Sequence[float], ys: Sequence[float]) -> np.ndarray:
    pts = np.array([xs, ys], dtype=np.float64).T
    diff = pts[:, None, :] - pts[None, :, :]
    return np.hypot(diff[..., 0], diff[..., 1])


def parse_instance(text: str, name: str = "instance") -> Instance:
    """Parse benchmark-format text into an Instance.

    Raises ParseError (with the offending line number) on malformed input:
    bad header, odd V, wrong vertex count, non-numeric fields, or
    pickup/dropoff load mismatches.
    """
    numbered = [(i + 1, ln.strip()) for i, ln in enumerate(text.splitlines())]
    lines = [(no, ln) for no, ln in numbered if ln]
    if not lines:
        raise ParseError("empty instance file", 1)

    header_no, header = lines[0]
    fields = header.split()
    if len(fields) != 5:
        raise ParseError(f"header must have 5 fields `m V T Q L`, got {len(fields)}", header_no)
    try:
        m = int(fields[0])
        v_count = int(fields[1])
        t_bound = float(fields[2])
        capacity = int(fields[3])
        l_bound = float(fields[4])
    except ValueError as exc:
        raise ParseError(f"non-numeric header field: {exc}", header_no) from None
    if m <= 0:
        raise ParseError(f"vehicle count must be positive, got {m}", header_no)
    if v_count < 0 or v_count % 2 != 0:
        raise ParseError(f"vertex count V must be even and nonnegative, got {v_count}", header_no)
    n = v_count // 2

    body = lines[1:]
    expected = 2 * n + 1
    if len(body) == expected + 1:
        # Tolerated trailing duplicate of the depot line.
        tail_no, tail = body[-1]
        tail_fields = tail.split()
        if tail_fields and tail_fields[0].split(".")[0] in ("0", "-0"):
            body = body[:-1]
        else:
            raise ParseError(
                f"expected {expected} vertex lines (or a trailing depot duplicate), "
                f"got {len(body)}",
                tail_no,
            )
    if len(body) != expected:
        bad_no = body[-1][0] if body else header_no
        raise ParseError(f"expected {expected} vertex lines, got {len(body)}", bad_no)

    vertices: list[Vertex] = []
    for pos, (no, ln) in enumerate(body):
        parts = ln.split()
        if len(parts) != 7:
            raise ParseError(f"vertex line must have 7 fields `id x y d q e l`, got {len(parts)}", no)
        try:
            vid = int(float(parts[0]))
            x, y, d = float(parts[1]), float(parts[2]), float(parts[3])
            q = int(float(parts[4]))
            e, l = float(parts[5]), float(parts[6])
        except ValueError as exc:
            raise ParseError(f"non-numeric vertex field: {exc}", no) from None
        if vid != pos:
            raise ParseError(f"vertex id {vid} out of order, expected {pos}", no)
        if d < 0:
            raise ParseError(f"negative service duration {d}", no)
        if e > l:
            raise ParseError(f"empty time window [{e}, {l}]", no)
        vertices.append(Vertex(vid, x, y, d, q, e, l))

    if vertices[0].load_change != 0:
        raise ParseError("depot must have load change 0", body[0][0])
    for i in range(1, n + 1):
        if vertices[i + n].load_change != -vertices[i].load_change:
            raise ParseError(
                f"dropoff {i + n} load {vertices[i + n].load_change} does not negate "
                f"pickup {i} load {vertices[i].load_change}",
                body[i + n][0],
            )

    matrix = _euclidean_matrix([v.x for v in vertices], [v.y for v in vertices])
    return Instance(
        name=name,
        n=n,
        m=m,
        capacity=capacity,
        route_duration_bound=t_bound,
        ride_time_bound=l_bound,
        vertices=vertices,
        travel_time_matrix=matrix,
    )


def load_instance(path) -> Instance:
    import os

    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    name = os.path.splitext(os.path.basename(str(path)))[0]
    return parse_instance(text, name=name)


def _fmt(value: float) -> str:
    """Shortest text that parses back to the same float (ints stay bare)."""
    if float(value) == int(value) and abs(value) < 1e15:
        return str(int(value))
    return repr(float(value))


def format_instance(instance: Instance) -> str:
    """Serialize back to the benchmark text format (value-exact round trip)."""
    out = [
        f"{instance.m} {2 * instance.n} {_fmt(instance.route_duration_bound)} "
        f"{instance.capacity} {_fmt(instance.ride_time_bound)}"
    ]
    for v in instance.vertices:
        out.append(
            f"{v.id} {_fmt(v.x)} {_fmt(v.y)} {_fmt(v.service_duration)} "
            f"{v.load_change} {_fmt(v.window_open)} {_fmt(v.window_close)}"
        )
    return "\n".join(out) + "\n"


def tighten_time_windows(instance: Instance) -> Instance:
    """Derive the implied window on each request's unspecified side.

    A side counts as "specified" when its window is strictly narrower than
    the planning horizon. For a request whose dropoff is specified, the
    pickup window shrinks to what the ride-time bound and direct travel
    allow; symmetrically for a specified pickup. Requests with both or
    neither side narrow are left untouched, which also makes the operation
    idempotent. The exact rule used by the original benchmark preprocessing
    is not published; this is the standard tightening and only ever shrinks
    windows, so no feasible schedule is lost.

    Raises InfeasibleRequestError when a tightened window comes out empty.
    """
    horizon = instance.horizon
    vertices = list(instance.vertices)
    ride = instance.ride_time_bound
    bad: list[int] = []
    for i in range(1, instance.n + 1):
        p = vertices[i]
        d = vertices[i + instance.n]
        direct = float(instance.travel_time_matrix[i, i + instance.n])
        p_narrow = (p.window_close - p.window_open) < horizon
        d_narrow = (d.window_close - d.window_open) < horizon
        if p_narrow == d_narrow:
            continue
        if d_narrow:
            new_open = max(p.window_open, d.window_open - ride - p.service_duration)
            new_close = min(p.window_close, d.window_close - direct - p.service_duration)
            vertices[i] = Vertex(
                p.id, p.x, p.y, p.service_duration, p.load_change, new_open, new_close
            )
            if new_open > new_close + EPS:
                bad.append(i)
        else:
            new_open = max(d.window_open, p.window_open + p.service_duration + direct)
            new_close = min(d.window_close, p.window_close + p.service_duration + ride)
            vertices[i + instance.n] = Vertex(
                d.id, d.x, d.y, d.service_duration, d.load_change, new_open, new_close
            )
            if new_open > new_close + EPS:
                bad.append(i)
    if bad:
        raise InfeasibleRequestError(bad)
    return Instance(
        name=instance.name,
        n=instance.n,
        m=instance.m,
        capacity=instance.capacity,
        route_duration_bound=instance.route_duration_bound,
        ride_time_bound=instance.ride_time_bound,
        vertices=vertices,
        travel_time_matrix=instance.travel_time_matrix,
    )
