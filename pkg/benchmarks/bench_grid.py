"""Compare the numba and numpy grid-scan backends on the D4 action.

    python benchmarks/bench_grid.py [--K 8 12] [--repeat 3]

Every non-identity element is fixed-point free, so each scan visits the whole
grid of K^6 points: this is the worst case for the brute-force oracle.
"""

from __future__ import annotations

import argparse
import time

from hypertorus import _kernels
from hypertorus.config import parse
from hypertorus.group import _grid_system, generate
from hypertorus.pipeline import build_action, load_bundled


def d4_elements():
    _, maps = build_action(parse(load_bundled("d4_extended.action")))
    return generate(maps).elements[1:]


def time_backend(elements, K: int, backend: str, repeat: int) -> float:
    systems = [_grid_system(f, K) for f in elements]
    best = float("inf")
    for _ in range(repeat):
        start = time.perf_counter()
        for A, c, modulus in systems:
            assert _kernels.grid_scan(A, c, modulus, K, backend=backend) == -1
        best = min(best, time.perf_counter() - start)
    return best


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--K", type=int, nargs="+", default=[6, 8, 10])
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()

    elements = d4_elements()
    backends = ["numpy"] + (["numba"] if _kernels.HAVE_NUMBA else [])
    if "numba" in backends:
        time_backend(elements[:1], 2, "numba", 1)  # compile outside the timings

    print(f"{'K':>4} {'points':>10} " + " ".join(f"{b:>10}" for b in backends) + "   speedup")
    for K in args.K:
        times = {b: time_backend(elements, K, b, args.repeat) for b in backends}
        speedup = times["numpy"] / times["numba"] if "numba" in times else float("nan")
        cells = " ".join(f"{times[b]:>9.3f}s" for b in backends)
        print(f"{K:>4} {len(elements) * K**6:>10} {cells}   {speedup:6.1f}x")


if __name__ == "__main__":
    main()
