"""Pre-freeze experiment: cross-check the eight-step scheme's feasibility
verdicts against the exhaustive grid search, for both forward-slack
ride-cap variants (spec-literal: cap at every downstream dropoff; aboard:
cap only at dropoffs whose pickup precedes the slack anchor).

Run from the repo root:  python3 scripts/slack_variant_experiment.py [routes]
"""

import random
import sys

sys.path.insert(0, "tests")

from helpers import gridded_instance, random_route
from bruteforce import brute_force_schedule_feasible

from mata import _pykernel
from mata.kernel import make_kernel


class AboardOnlyKernel(_pykernel.Kernel):
    """Slack caps ride time only for passengers already aboard at anchor i."""

    def _slack(self, i, q, vert, partner, B, W, D):
        n = self.n
        l = self.l
        ride_bound = self.ride_bound
        best = _pykernel.INF
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


def main(total=3000, seed=12345):
    rng = random.Random(seed)
    stats = {
        "literal_missed_feasible": 0,   # brute feasible, literal says no
        "aboard_missed_feasible": 0,
        "literal_false_feasible": 0,    # literal says yes, brute says no
        "aboard_false_feasible": 0,
        "feasible": 0,
        "infeasible": 0,
        "disagree_variants": 0,
    }
    examples = []
    for it in range(total):
        inst = gridded_instance(rng, rng.randint(1, 3))
        route = random_route(rng, inst.n, max_requests=3)
        literal = make_kernel(inst).feasible(route)
        aboard = AboardOnlyKernel(
            inst.n, inst.capacity, inst.route_duration_bound, inst.ride_time_bound,
            inst.window_open_arr, inst.window_close_arr, inst.service_arr,
            inst.load_arr, inst.travel_time_matrix,
        ).feasible(route)
        brute = brute_force_schedule_feasible(inst, route)
        stats["feasible" if brute else "infeasible"] += 1
        if literal != aboard:
            stats["disagree_variants"] += 1
        if brute and not literal:
            stats["literal_missed_feasible"] += 1
            if len(examples) < 5:
                examples.append(("literal-missed", inst.name, route))
        if brute and not aboard:
            stats["aboard_missed_feasible"] += 1
            if len(examples) < 5:
                examples.append(("aboard-missed", inst.name, route))
        if literal and not brute:
            stats["literal_false_feasible"] += 1
            examples.append(("literal-false", inst, route))
        if aboard and not brute:
            stats["aboard_false_feasible"] += 1
            examples.append(("aboard-false", inst, route))
        if (it + 1) % 500 == 0:
            print(f"...{it + 1} routes", flush=True)
    for k, v in stats.items():
        print(f"{k}: {v}")
    for e in examples[:10]:
        print("example:", e[0], e[2])


if __name__ == "__main__":
    main(int(sys.argv[1]) if len(sys.argv) > 1 else 3000)
