"""Write the SVG figures: a random triptych, the crossing witness and a tower."""

import argparse
from pathlib import Path

from yao4 import generators as gen
from yao4.build import build_optimized
from yao4.svg import render_svg


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("out_dir", nargs="?", default="figures")
    ap.add_argument("--seed", type=int, default=7)
    args = ap.parse_args()
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)

    panels = {
        "random40": (gen.gen_random(40, args.seed), [{0}, {1}, {0, 1}]),
        "crossing": (gen.gen_crossing(0), [{0}, {1}, {0, 1}]),
        "negline": (gen.gen_negative_slope_line(12, args.seed), [{0}, {1}, {0, 1}]),
        "lambda": (gen.gen_lambda(15, 1.0, 8.0, args.seed), [{0, 1}]),
        "tower": (gen.gen_tower(4, 0), [{0, 1}]),
        "staircase": (gen.gen_staircase(12, args.seed), [{0}]),
    }
    for name, (inst, lams) in panels.items():
        graphs = [build_optimized(inst.point_set, lam) for lam in lams]
        path = out / f"{name}.svg"
        path.write_text(render_svg(graphs, inst.landmarks), encoding="utf-8")
        print(f"{path}: {inst.verdict}")


if __name__ == "__main__":
    main()
