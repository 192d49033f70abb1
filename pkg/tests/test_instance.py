import math
import random

import pytest

from mata.instance import (
    InfeasibleRequestError,
    ParseError,
    format_instance,
    parse_instance,
    tighten_time_windows,
    travel_time,
)

from helpers import build_instance


def make_text(m, n, t=480, q=6, ell=90, trailing_depot=False, mangle=None):
    lines = [f"{m} {2 * n} {t} {q} {ell}", "0 0.0 0.0 0 0 0 1440"]
    for i in range(1, n + 1):
        lines.append(f"{i} {i}.5 -{i} 10 1 0 1440")
    for i in range(1, n + 1):
        lines.append(f"{i + n} -{i} {i}.25 10 -1 {60 + i} {75 + i}")
    if trailing_depot:
        lines.append("0 0.0 0.0 0 0 0 1440")
    text = "\n".join(lines) + "\n"
    if mangle:
        text = mangle(text)
    return text


class TestParse:
    def test_r1a_shaped_header(self):
        inst = parse_instance(make_text(3, 24))
        assert inst.m == 3
        assert inst.n == 24
        assert inst.route_duration_bound == 480
        assert inst.capacity == 6
        assert inst.ride_time_bound == 90

    def test_r3a_shaped_header(self):
        inst = parse_instance(make_text(7, 72))
        assert inst.m == 7
        assert inst.n == 72

    def test_trailing_depot_line_ignored(self):
        plain = parse_instance(make_text(2, 3))
        dup = parse_instance(make_text(2, 3, trailing_depot=True))
        assert plain.n == dup.n
        assert plain.vertices == dup.vertices

    def test_malformed_header(self):
        with pytest.raises(ParseError) as exc:
            parse_instance("3 48 480 6\n")
        assert "line 1" in str(exc.value)

    def test_odd_vertex_count(self):
        with pytest.raises(ParseError, match="even"):
            parse_instance("3 47 480 6 90\n" + "0 0 0 0 0 0 10\n")

    def test_vertex_count_mismatch(self):
        text = make_text(2, 3)
        text = "\n".join(text.splitlines()[:-2]) + "\n"
        with pytest.raises(ParseError, match="vertex lines"):
            parse_instance(text)

    def test_load_mismatch_reports_line(self):
        def mangle(text):
            lines = text.splitlines()
            lines[5] = lines[5].replace(" -1 ", " -2 ")  # dropoff of request 1
            return "\n".join(lines)

        with pytest.raises(ParseError) as exc:
            parse_instance(make_text(1, 2, mangle=mangle))
        assert "line 6" in str(exc.value)
        assert "negate" in str(exc.value)

    def test_non_numeric_field_reports_line(self):
        def mangle(text):
            return text.replace("10 1 0 1440", "10 x 0 1440", 1)

        with pytest.raises(ParseError) as exc:
            parse_instance(make_text(1, 2, mangle=mangle))
        assert exc.value.line == 3

    def test_roundtrip_value_exact(self):
        first = parse_instance(make_text(3, 5))
        second = parse_instance(format_instance(first))
        assert first.vertices == second.vertices
        assert first.m == second.m
        assert first.capacity == second.capacity
        assert first.route_duration_bound == second.route_duration_bound
        assert first.ride_time_bound == second.ride_time_bound

    def test_roundtrip_bundled(self, r1a):
        again = parse_instance(format_instance(r1a), r1a.name)
        assert again.vertices == r1a.vertices


class TestTravelTime:
    def test_zero_diagonal(self, toy):
        assert travel_time(toy, 1, 1) == 0.0

    def test_euclidean_345(self):
        inst = build_instance(
            "t345", 1, 1, 100, 100,
            [(0, 0, 0, 0, 0, 100), (3, 4, 0, 1, 0, 100), (0, 0, 0, -1, 0, 100)],
        )
        assert travel_time(inst, 0, 1) == 5.0

    def test_symmetry_bundled(self, r1a):
        size = 2 * r1a.n + 1
        for i in range(size):
            for j in range(size):
                assert travel_time(r1a, i, j) == travel_time(r1a, j, i)

    def test_triangle_inequality_bundled(self, r1a):
        tt = r1a.travel_time_matrix
        size = 2 * r1a.n + 1
        rng = random.Random(7)
        for _ in range(20000):
            i, j, k = rng.randrange(size), rng.randrange(size), rng.randrange(size)
            assert tt[i, k] <= tt[i, j] + tt[j, k] + 1e-9

    def test_out_of_range(self, toy):
        with pytest.raises(IndexError):
            travel_time(toy, 0, 3)


def two_sided_instance(pe, pl, de, dl, direct=10.0, ride=90.0, service=0.0, horizon=1000.0):
    return build_instance(
        "tw", 1, 6, 480, ride,
        [
            (0.0, 0.0, 0.0, 0, 0.0, horizon),
            (0.0, 0.0, service, 1, pe, pl),
            (direct, 0.0, service, -1, de, dl),
        ],
    )


class TestTighten:
    def test_pickup_specified_formula(self):
        # pickup [100, 120], service 0, direct travel 10, L=90:
        # dropoff window becomes [max(e', 110), min(l', 210)]
        inst = two_sided_instance(100, 120, 0, 1000)
        adj = tighten_time_windows(inst)
        assert adj.vertices[2].window_open == 110.0
        assert adj.vertices[2].window_close == 210.0
        # pickup side untouched
        assert adj.vertices[1].window_open == 100.0
        assert adj.vertices[1].window_close == 120.0

    def test_dropoff_specified_formula(self):
        inst = two_sided_instance(0, 1000, 300, 320)
        adj = tighten_time_windows(inst)
        assert adj.vertices[1].window_open == 300.0 - 90.0
        assert adj.vertices[1].window_close == 320.0 - 10.0

    def test_already_tight_is_noop(self):
        inst = two_sided_instance(100, 120, 115, 150)  # both sides narrow
        adj = tighten_time_windows(inst)
        assert adj.vertices == inst.vertices

    def test_idempotent_bundled(self, bundled_adjusted):
        for name, adj in bundled_adjusted.items():
            twice = tighten_time_windows(adj)
            assert twice.vertices == adj.vertices, name

    def test_never_widens(self, r1a, r1a_adj):
        for before, after in zip(r1a.vertices, r1a_adj.vertices):
            assert after.window_open >= before.window_open
            assert after.window_close <= before.window_close

    def test_infeasible_request_reported(self):
        # direct travel exceeds the ride bound plus the pickup window width,
        # so the derived dropoff window is empty
        inst = two_sided_instance(990, 995, 0, 1000, direct=100.0)
        with pytest.raises(InfeasibleRequestError) as exc:
            tighten_time_windows(inst)
        assert exc.value.requests == [1]

    def test_feasible_schedules_survive_tightening(self, r1a, r1a_adj):
        # sample single-request schedules feasible under the original
        # windows and the ride bound; all must satisfy the tightened windows
        rng = random.Random(42)
        ride_bound = r1a.ride_time_bound
        checked = 0
        attempts = 0
        while checked < 1000 and attempts < 100000:
            attempts += 1
            req = r1a.requests[rng.randrange(r1a.n)]
            p = r1a.vertices[req.pickup]
            d = r1a.vertices[req.dropoff]
            direct = travel_time(r1a, req.pickup, req.dropoff)
            bp = rng.uniform(p.window_open, p.window_close)
            lo = max(d.window_open, bp + p.service_duration + direct)
            hi = min(d.window_close, bp + p.service_duration + ride_bound)
            if lo > hi:
                continue
            bd = rng.uniform(lo, hi)
            ap = r1a_adj.vertices[req.pickup]
            ad = r1a_adj.vertices[req.dropoff]
            assert ap.window_open - 1e-9 <= bp <= ap.window_close + 1e-9
            assert ad.window_open - 1e-9 <= bd <= ad.window_close + 1e-9
            checked += 1
        assert checked == 1000

    def test_sort_keys_recomputed(self, r1a, r1a_adj):
        for before, after in zip(r1a.requests, r1a_adj.requests):
            expected = (
                r1a_adj.vertices[after.pickup].window_close
                + r1a_adj.vertices[after.dropoff].window_open
            )
            assert after.sort_key == expected
            assert after.index == before.index
