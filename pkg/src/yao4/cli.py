"""Command-line front end: ``yao4 gen|analyze|render|reproduce``.

Exit status is 0 on success, 1 when a verification or assertion fails and
2 for usage or parse errors.  ``YAO4_THREADS`` caps the worker count of the
kd-tree queries (0 or unset means all cores).
"""

from __future__ import annotations

import argparse
import logging
import math
import sys
from dataclasses import replace
from pathlib import Path
from typing import Sequence

from . import analysis as an
from . import generators as gen
from . import io
from .build import (
    DuplicatePointError,
    LambdaSubsetError,
    build_optimized,
    build_reference,
    parse_lambda,
)
from .reproduce import DILATION_TOL, ReproduceConfig, run
from .svg import render_svg

log = logging.getLogger("yao4")

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
ANALYSES = ("crossings", "components", "stretch", "dilation")


class UsageError(Exception):
    pass


def _lambda(spec: str) -> frozenset[int]:
    try:
        return parse_lambda(spec)
    except ValueError as exc:
        raise UsageError(f"bad --lambda {spec!r}: {exc}") from exc


def _gen_kwargs(args: argparse.Namespace) -> dict:
    fam = args.family
    if fam == "random":
        return {"n": args.n if args.n is not None else 40, "seed": args.seed}
    if fam == "negline":
        return {"n": args.n if args.n is not None else 50, "seed": args.seed}
    if fam == "lambda":
        return {"n_per_arm": args.n if args.n is not None else 100, "w": args.w, "h": args.h, "seed": args.seed}
    if fam == "tower":
        return {"t": args.t, "seed": args.seed}
    if fam == "crossing":
        return {"seed": args.seed, "max_tries": args.max_tries}
    if fam == "staircase":
        return {"m": args.m, "seed": args.seed}
    raise UsageError(f"unknown family {fam!r}")


def cmd_gen(args: argparse.Namespace) -> int:
    out = Path(args.out or f"{args.family}.csv")
    try:
        inst = gen.FAMILIES[args.family](**_gen_kwargs(args))
    except (gen.CapacityError, gen.GeometryError, ValueError) as exc:
        raise UsageError(str(exc)) from exc
    except (gen.ConstructionError, gen.SearchExhaustedError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    io.write_point_set(out, inst.point_set)
    side = io.write_landmarks(out, inst.landmarks)
    print(f"wrote {out} ({len(inst.point_set)} points) and {side}")
    for check, value in zip(inst.claim, inst.measured):
        print(f"claim: {check.describe()}  measured: {gen._fmt(value)}")
    print("verdict: verified")
    return EXIT_OK


def _lemma_checks(g, reports: dict) -> list[str]:
    """Statements that must hold on clean input; returns the violated ones."""
    lam = g.lam
    bad = []
    if len(lam) == 1:
        if reports["crossings"].count:
            bad.append(f"single-quadrant graph has {reports['crossings'].count} crossings")
        forest, cert = an.is_planar_forest(g)
        if not forest:
            bad.append(f"single-quadrant graph is not a planar forest: {cert[0]}")
        dil = reports["dilation"].max_path_dilation
        if dil is not None and dil > math.sqrt(2.0) + DILATION_TOL:
            bad.append(f"directed dilation {dil:.17g} exceeds sqrt(2)")
    if lam in an.ADJACENT_PAIRS:
        comp = reports["components"]
        if comp.component_count != 1:
            bad.append(f"adjacent-pair graph has {comp.component_count} components")
        if not comp.top_reachable_from_all:
            bad.append("topmost vertex not reachable from every vertex")
    return bad


def cmd_analyze(args: argparse.Namespace) -> int:
    ps = io.read_point_set(args.input)
    if len(ps) < 1:
        raise UsageError("input has no points")
    lam = _lambda(args.lam)
    wanted = [a.strip() for a in args.analyses.split(",") if a.strip()]
    unknown = set(wanted) - set(ANALYSES)
    if unknown:
        raise UsageError(f"unknown analyses {sorted(unknown)}")
    g = build_optimized(ps, lam)
    failures: list[str] = []
    warnings: list[str] = []
    if not ps.validation.clean:
        v = ps.validation
        warnings.append(
            f"input not in general position ({len(v.distance_ties)} distance ties, "
            f"{len(v.shared_x)} shared x, {len(v.shared_y)} shared y)"
        )
    if args.check and build_reference(ps, lam) != g:
        failures.append("optimized builder disagrees with reference builder")

    reports: dict = {}
    docs: dict = {}
    need = set(wanted) | ({"crossings", "components", "dilation"} if args.check else set())
    if "crossings" in need:
        reports["crossings"] = an.find_crossings(g)
    if "components" in need:
        reports["components"] = an.connected_components(g)
    if "stretch" in need and len(ps) >= 2:
        reports["stretch"] = an.undirected_stretch(g)
    if "dilation" in need:
        reports["dilation"] = an.directed_path_dilation(g)
    builders = {
        "crossings": io.crossings_doc,
        "components": io.components_doc,
        "stretch": io.stretch_doc,
        "dilation": io.dilation_doc,
    }
    for name in ANALYSES:
        if name in wanted and name in reports:
            docs[name] = builders[name](reports[name])
    if args.matrix:
        docs["matrix"] = io.matrix_doc(an.property_matrix(ps))
    if args.check:
        violated = _lemma_checks(g, reports)
        if ps.validation.clean:
            failures.extend(violated)
        else:
            warnings.extend(f"lemma check skipped on dirty input: {m}" for m in violated)

    doc = io.report_doc(g, docs, landmarks=io.read_landmarks(args.input), warnings=warnings + failures)
    text = io.dumps_report(doc)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    for w in warnings:
        print(f"warning: {w}", file=sys.stderr)
    for f in failures:
        print(f"FAIL: {f}", file=sys.stderr)
    return EXIT_FAIL if failures else EXIT_OK


def cmd_render(args: argparse.Namespace) -> int:
    ps = io.read_point_set(args.input)
    lams = args.lam or ["0", "1", "0,1"]
    graphs = [build_optimized(ps, _lambda(s)) for s in lams]
    svg = render_svg(graphs, io.read_landmarks(args.input))
    out = Path(args.out or Path(args.input).with_suffix(".svg"))
    out.write_text(svg, encoding="utf-8")
    print(f"wrote {out}")
    return EXIT_OK


def cmd_reproduce(args: argparse.Namespace) -> int:
    cfg = ReproduceConfig()
    if args.seeds is not None:
        cfg = replace(cfg, seeds=args.seeds)
    if args.equivalence_sets is not None:
        cfg = replace(cfg, equivalence_sets=args.equivalence_sets)
    if min(cfg.seeds, cfg.equivalence_sets) < 1:
        raise UsageError("--seeds and --equivalence-sets must be positive")
    results, summary = run(cfg, args.out_dir)
    for r in results:
        print(r.line())
    for row in summary["table"]["rows"]:
        key = "{" + ",".join(map(str, row["lambda"])) + "}"
        cells = ", ".join(f"{k}={v}" for k, v in row["observed"].items())
        print(f"{'ok ' if row['matches'] else 'BAD'} Y4^{key}: {cells}")
    print(f"reports written to {args.out_dir}")
    return EXIT_OK if summary["passed"] else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="yao4", description="Quadrant subgraphs of the four-cone Yao graph.")
    p.add_argument("-v", "--verbose", action="store_true", help="log progress and timings")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate an instance family and verify its claim")
    g.add_argument("family", choices=sorted(gen.FAMILIES))
    g.add_argument("-o", "--out", help="point file to write (default <family>.csv)")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--n", type=int, help="points (random, negline) or points per arm (lambda)")
    g.add_argument("--t", type=float, default=10.0, help="tower dilation target")
    g.add_argument("--w", type=float, default=1.0, help="lambda half-width")
    g.add_argument("--h", type=float, default=50.0, help="lambda height")
    g.add_argument("--m", type=int, default=40, help="staircase steps")
    g.add_argument("--max-tries", type=int, default=10**6, help="crossing search budget")
    g.set_defaults(func=cmd_gen)

    a = sub.add_parser("analyze", help="build a quadrant subgraph and write a JSON report")
    a.add_argument("input")
    a.add_argument("--lambda", dest="lam", default="0,1,2,3", help="quadrant list, e.g. 0 or 0,1 or all")
    a.add_argument("-o", "--out", help="report path (default stdout)")
    a.add_argument("--analyses", default=",".join(ANALYSES), help="comma list of " + ",".join(ANALYSES))
    a.add_argument("--check", action="store_true", help="cross-check builders and assert the lemmas")
    a.add_argument("--matrix", action="store_true", help="add the per-quadrant-list property matrix")
    a.set_defaults(func=cmd_analyze)

    r = sub.add_parser("render", help="draw one SVG panel per quadrant list")
    r.add_argument("input")
    r.add_argument("--lambda", dest="lam", action="append", help="repeatable; default 0, 1 and 0,1")
    r.add_argument("-o", "--out", help="SVG path (default next to the input)")
    r.set_defaults(func=cmd_render)

    x = sub.add_parser("reproduce", help="run every acceptance check and write reports")
    x.add_argument("out_dir")
    x.add_argument("--seeds", type=int, help="random sets per suite (default 100)")
    x.add_argument("--equivalence-sets", type=int, help="sets for the builder cross-check (default 1000)")
    x.set_defaults(func=cmd_reproduce)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        return args.func(args)
    except (UsageError, io.ParseError, DuplicatePointError, LambdaSubsetError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
