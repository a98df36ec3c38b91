"""Time the reference and optimized builders on uniform random points."""

import argparse
import time

import numpy as np

from yao4.build import PointSet, build_optimized, build_reference


def random_points(n: int, seed: int) -> PointSet:
    rng = np.random.default_rng(seed)
    pts = np.unique(rng.integers(0, 10**9, size=(n, 2)), axis=0)
    rng.shuffle(pts)
    return PointSet.from_coords(pts.tolist())


def timed(fn, *args):
    t0 = time.perf_counter()
    out = fn(*args)
    return out, time.perf_counter() - t0


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--sizes", type=int, nargs="+", default=[1000, 5000, 20000])
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--skip-reference-above", type=int, default=50000)
    args = ap.parse_args()

    print(f"{'n':>8} {'optimized s':>12} {'reference s':>12} {'speedup':>8}")
    for n in args.sizes:
        ps = random_points(n, args.seed)
        fast, t_fast = timed(build_optimized, ps)
        if n > args.skip_reference_above:
            print(f"{n:>8} {t_fast:>12.3f} {'-':>12} {'-':>8}")
            continue
        slow, t_slow = timed(build_reference, ps)
        assert fast == slow, "builders disagree"
        print(f"{n:>8} {t_fast:>12.3f} {t_slow:>12.3f} {t_slow / t_fast:>7.1f}x")


if __name__ == "__main__":
    main()
