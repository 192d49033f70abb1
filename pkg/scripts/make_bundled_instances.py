"""Regenerate the bundled benchmark-shaped instances.

The canonical R-series dial-a-ride files are not redistributable here, so
the package bundles instances drawn from the same published generation
protocol at the same shapes:

  * coordinates uniform in [-10, 10]^2 (minutes of travel), depot at (0,0)
  * short fixed service duration and unit load at every user vertex
  * half the requests outbound (tight dropoff window), half inbound (tight
    pickup window); tight windows are 15 min wide with the open end drawn
    uniformly from [60, 465]; the free side spans the whole day [0, 1440]
  * duration bound 480, capacity 6, ride-time bound 90

Shapes: r1a 24x3, r3a 72x7, r6a 144x13, r8a 72x6. The service duration (3)
was fixed empirically: it reproduces the canonical per-instance difficulty
signature (time-to-first-feasible ordering and magnitudes) where longer
services do not. Seeds are fixed; rerun this script only if the files must
change, then recalibrate data/reference_costs.json.
"""

import random
from pathlib import Path

SHAPES = {
    "r1a_gen": (24, 3, 227),
    "r3a_gen": (72, 7, 279),
    "r6a_gen": (144, 13, 357),
    "r8a_gen": (72, 6, 278),
}

T_BOUND = 480
CAPACITY = 6
RIDE_BOUND = 90
DAY = 1440
SERVICE = 3
WINDOW_WIDTH = 15


def generate(n: int, m: int, seed: int) -> str:
    rng = random.Random(seed)
    lines = [f"{m} {2 * n} {T_BOUND} {CAPACITY} {RIDE_BOUND}"]
    lines.append(f"0 0 0 0 0 0 {DAY}")

    def coord() -> float:
        return round(rng.uniform(-10.0, 10.0), 3)

    windows = []
    for i in range(1, n + 1):
        outbound = i <= n // 2
        open_min = rng.randint(60, T_BOUND - WINDOW_WIDTH)
        tight = (open_min, open_min + WINDOW_WIDTH)
        free = (0, DAY)
        windows.append((free, tight) if outbound else (tight, free))

    for i in range(1, n + 1):
        (e, l) = windows[i - 1][0]
        lines.append(f"{i} {coord()} {coord()} {SERVICE} 1 {e} {l}")
    for i in range(1, n + 1):
        (e, l) = windows[i - 1][1]
        lines.append(f"{i + n} {coord()} {coord()} {SERVICE} -1 {e} {l}")
    return "\n".join(lines) + "\n"


def main():
    out_dir = Path(__file__).resolve().parent.parent / "src" / "mata" / "data"
    out_dir.mkdir(parents=True, exist_ok=True)
    for name, (n, m, seed) in SHAPES.items():
        path = out_dir / f"{name}.txt"
        path.write_text(generate(n, m, seed))
        print(f"wrote {path} (n={n}, m={m}, seed={seed})")


if __name__ == "__main__":
    main()
