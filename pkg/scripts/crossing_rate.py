"""How often do two-quadrant graphs cross?  Counts over seeded random sets.

Single quadrants should never cross; adjacent pairs do now and then, and
opposite pairs more often.  Also reports how many tries the crossing search
needs per seed.
"""

import argparse

from yao4 import analysis as an
from yao4 import generators as gen
from yao4.build import build_optimized, restrict

LAMBDAS = [(0,), (1,), (0, 1), (1, 2), (0, 2), (0, 1, 2, 3)]


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--sets", type=int, default=50)
    ap.add_argument("--n", type=int, default=200)
    ap.add_argument("--search-seeds", type=int, default=10)
    args = ap.parse_args()

    hits = {lam: 0 for lam in LAMBDAS}
    total = {lam: 0 for lam in LAMBDAS}
    for seed in range(args.sets):
        full = build_optimized(gen.gen_random(args.n, seed).point_set)
        for lam in LAMBDAS:
            c = an.find_crossings(restrict(full, lam)).count
            hits[lam] += c > 0
            total[lam] += c
    print(f"{'lambda':>10} {'sets with crossings':>20} {'mean crossings':>15}")
    for lam in LAMBDAS:
        key = "{" + ",".join(map(str, lam)) + "}"
        print(f"{key:>10} {hits[lam]:>12}/{args.sets:<7} {total[lam] / args.sets:>15.2f}")

    tries = [gen.gen_crossing(s).params["attempts"] for s in range(args.search_seeds)]
    print(f"crossing search tries per seed: {tries}")


if __name__ == "__main__":
    main()
