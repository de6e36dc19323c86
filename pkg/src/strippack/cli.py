"""Command-line interface.

Exit codes: 0 success, 1 a lemma, certificate or feasibility violation,
2 bad input, 3 internal error. Reports are JSON on stdout with exact
rationals written as integers or ``"p/q"`` strings.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path
from typing import Optional, Sequence

from . import __version__
from .analysis import (
    STATED_OPTIMUM,
    gap_width_check,
    lemma_suite,
    line_occupancy_check,
    qp_objective,
    qp_search,
    region_occupancy,
    stated_point,
    strip_partition,
)
from .bounds import certify_theorem1, lower_bounds
from .core import StripPackError, format_scalar, verify_feasible
from .engine import PlacementTrace, TraceStep, audit_bl_minimality, bl_pack
from .generators import FAMILIES, FamilySpec, gen, gen_corpus, random_corpus_specs
from .io import dumps, instance_to_dict, load_instance, load_packing, loads, packing_to_dict
from .oracle import DEFAULT_NODE_BUDGET, exact_opt
from .ordering import OrderingKind, check_q_height_criterion, fqw_partition
from .render import render_svg

EXIT_OK, EXIT_VIOLATION, EXIT_INPUT, EXIT_INTERNAL = 0, 1, 2, 3
ORDERS = [k.value for k in OrderingKind]


class _InputError(Exception):
    pass


def _emit(report: dict, out: Optional[str] = None) -> None:
    text = dumps(report)
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _trace_of(packing) -> PlacementTrace:
    """A packing file lists placements in placement order; read it back as a trace."""
    return PlacementTrace(packing.instance,
                          tuple(TraceStep(p.rect_id, p.x, p.y) for p in packing.placements))


def _trace_dict(trace: PlacementTrace) -> list[dict]:
    return [{"step": i, "id": s.rect_id, "x": format_scalar(s.x), "y": format_scalar(s.y),
             "candidates": s.candidates} for i, s in enumerate(trace.steps, 1)]


def _regions_dict(trace: PlacementTrace) -> list[dict]:
    out = []
    for reg, occ in zip(strip_partition(trace), region_occupancy(trace)):
        d = reg.to_dict()
        d["min_fraction"] = None if occ.skipped else format_scalar(occ.min_fraction)
        out.append(d)
    return out


def cmd_pack(args) -> int:
    inst = load_instance(args.instance)
    trace = bl_pack(inst, args.order)
    audit = audit_bl_minimality(trace)
    if not audit.ok:
        raise AssertionError(audit.message)
    report = packing_to_dict(trace.packing)
    report["order"] = args.order
    if args.trace:
        Path(args.trace).write_text(dumps({"order": args.order, "steps": _trace_dict(trace)}))
    if args.svg:
        regions = strip_partition(trace) if args.regions else None
        Path(args.svg).write_text(render_svg(trace.packing, scale=args.scale, regions=regions))
    _emit(report, args.out)
    if args.out:
        print(f"height {format_scalar(trace.height)}")
    return EXIT_OK


def cmd_verify(args) -> int:
    packing = load_packing(args.packing)
    rep = verify_feasible(packing)
    _emit({"ok": rep.ok, "height": format_scalar(packing.height),
           "violations": list(rep.violations)})
    return EXIT_OK if rep.ok else EXIT_VIOLATION


def cmd_analyze(args) -> int:
    inst = load_instance(args.instance)
    part = fqw_partition(inst)
    trace = bl_pack(inst, args.order, part if args.order == "fqw" else None)
    report = {"order": args.order, "height": format_scalar(trace.height),
              "regions": _regions_dict(trace)}
    ok = True
    if args.order == "fqw":
        lemmas = lemma_suite(trace, part)
        cert = certify_theorem1(trace, part)
        report["partition"] = part.to_dict()
        report["degenerate"] = lemmas.degenerate
        report["context"] = None if lemmas.context is None else lemmas.context.to_dict()
        report["checks"] = [c.to_dict() for c in lemmas.checks]
        report["certificate"] = cert.to_dict()
        ok = lemmas.ok and cert.ok
    else:
        checks = [gap_width_check(trace), line_occupancy_check(trace)]
        report["checks"] = [c.to_dict() for c in checks]
        ok = all(c.ok for c in checks)
    report["ok"] = ok
    _emit(report)
    return EXIT_OK if ok else EXIT_VIOLATION


def cmd_partition(args) -> int:
    inst = load_instance(args.instance)
    part = fqw_partition(inst)
    crit = check_q_height_criterion(inst, part)
    _emit({"partition": part.to_dict(),
           "q_height_criterion": {k: format_scalar(v) if isinstance(v, Fraction) else v
                                  for k, v in crit.items()}})
    return EXIT_OK


def cmd_bounds(args) -> int:
    inst = load_instance(args.instance)
    trace = bl_pack(inst, "fqw")
    cert = certify_theorem1(trace)
    _emit({"lower_bounds": lower_bounds(inst).to_dict(), "h_BL_fqw": format_scalar(trace.height),
           "certificate": cert.to_dict()})
    return EXIT_OK if cert.ok else EXIT_VIOLATION


def cmd_opt(args) -> int:
    inst = load_instance(args.instance)
    res = exact_opt(inst, node_budget=args.budget)
    _emit(res.to_dict())
    return EXIT_OK


def cmd_ratio(args) -> int:
    inst = load_instance(args.instance)
    h_bl = bl_pack(inst, args.order).height
    if args.lb:
        denom, source = lower_bounds(inst).lb, "lower_bound"
    else:
        res = exact_opt(inst, node_budget=args.budget)
        if res.status != "exact":
            raise _InputError(f"exact search stopped after {res.nodes_explored} nodes; "
                              "rerun with --lb for the ratio against the lower bound")
        denom, source = res.h_opt, "exact"
    ratio = Fraction(1) if denom == 0 else h_bl / denom
    _emit({"order": args.order, "h_BL": format_scalar(h_bl), "denominator": format_scalar(denom),
           "source": source,
           "label": "ratio vs optimum" if source == "exact" else "ratio vs lower bound",
           "ratio": format_scalar(ratio), "ratio_decimal": round(float(ratio), 6)})
    return EXIT_OK


def _parse_params(items: Sequence[str]) -> dict:
    params = {}
    for item in items:
        if "=" not in item:
            raise _InputError(f"parameter {item!r} should look like key=value")
        key, value = item.split("=", 1)
        try:
            params[key] = json.loads(value)
        except json.JSONDecodeError:
            params[key] = value
    return params


def cmd_gen(args) -> int:
    if args.family == "corpus":
        if not args.out_dir:
            raise _InputError("gen corpus needs --out-dir")
        specs = random_corpus_specs(args.count, args.seed, squares=args.squares)
        manifest = gen_corpus(specs, args.out_dir)
        print(f"wrote {len(manifest['instances'])} instances to {args.out_dir}")
        return EXIT_OK
    inst = gen(FamilySpec(args.family, _parse_params(args.param)))
    _emit(instance_to_dict(inst), args.out)
    return EXIT_OK


def cmd_qp_check(args) -> int:
    if args.samples == 0:
        point = stated_point(args.k_max)
        value = qp_objective(point)
        report = {"value": format_scalar(value), "point": point.to_dict(), "samples": 0,
                  "exceeded": 0, "stated_optimum": format_scalar(STATED_OPTIMUM)}
        exceeded = 0
    else:
        res = qp_search(args.k_max, args.samples, args.seed)
        report = res.to_dict()
        exceeded = res.exceeded + (res.value > STATED_OPTIMUM)
    report["ok"] = exceeded == 0
    _emit(report)
    return EXIT_OK if exceeded == 0 else EXIT_VIOLATION


def cmd_render(args) -> int:
    packing = load_packing(args.packing)
    regions = strip_partition(_trace_of(packing)) if args.regions else None
    svg = render_svg(packing, scale=args.scale, regions=regions)
    if args.out:
        Path(args.out).write_text(svg)
    else:
        sys.stdout.write(svg)
    return EXIT_OK


def _bench_rows(corpus: Path, orders: list[str], exact_max_n: int, budget: int):
    manifest_path = corpus / "manifest.json"
    try:
        manifest = loads(manifest_path.read_text())
    except OSError as exc:
        raise _InputError(f"cannot read {manifest_path}: {exc}") from None
    stats = {o: {"n": 0, "lb_sum": Fraction(0), "lb_max": None,
                 "ex_n": 0, "ex_sum": Fraction(0), "ex_max": None} for o in orders}
    for entry in manifest.get("instances", []):
        inst = load_instance(corpus / entry["file"])
        lb = lower_bounds(inst).lb
        opt = None
        if len(inst.rects) <= exact_max_n:
            res = exact_opt(inst, node_budget=budget)
            if res.status == "exact":
                opt = res.h_opt
        for o in orders:
            h = bl_pack(inst, o).height
            s = stats[o]
            r = Fraction(1) if lb == 0 else h / lb
            s["n"] += 1
            s["lb_sum"] += r
            s["lb_max"] = r if s["lb_max"] is None else max(s["lb_max"], r)
            if opt is not None:
                r = Fraction(1) if opt == 0 else h / opt
                s["ex_n"] += 1
                s["ex_sum"] += r
                s["ex_max"] = r if s["ex_max"] is None else max(s["ex_max"], r)
    rows = []
    for o in orders:
        s = stats[o]
        rows.append({
            "order": o, "instances": s["n"],
            "mean_ratio_lb": None if not s["n"] else round(float(s["lb_sum"] / s["n"]), 6),
            "max_ratio_lb": None if s["lb_max"] is None else format_scalar(s["lb_max"]),
            "solved": s["ex_n"],
            "mean_ratio_opt": None if not s["ex_n"] else round(float(s["ex_sum"] / s["ex_n"]), 6),
            "max_ratio_opt": None if s["ex_max"] is None else format_scalar(s["ex_max"]),
        })
    return rows


def cmd_bench(args) -> int:
    orders = ORDERS if args.orders == "all" else [o.strip() for o in args.orders.split(",")]
    for o in orders:
        if o not in ORDERS:
            raise _InputError(f"unknown ordering {o!r}; choose from {ORDERS}")
    rows = _bench_rows(Path(args.corpus_dir), orders, args.exact_max_n, args.budget)
    if args.json:
        _emit({"rows": rows})
        return EXIT_OK
    head = ("order", "instances", "mean_ratio_lb", "max_ratio_lb", "solved",
            "mean_ratio_opt", "max_ratio_opt")
    table = [head] + [tuple("-" if r[k] is None else str(r[k]) for k in head) for r in rows]
    widths = [max(len(row[i]) for row in table) for i in range(len(head))]
    for row in table:
        print("  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip())
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="strippack",
                                description="Bottom-Left strip packing with exact arithmetic.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("pack", help="run BL under an ordering and write the packing")
    s.add_argument("instance")
    s.add_argument("--order", choices=ORDERS, default="fqw")
    s.add_argument("--out", help="packing JSON path (default: stdout)")
    s.add_argument("--svg", help="also write an SVG drawing")
    s.add_argument("--regions", action="store_true", help="draw region braces in the SVG")
    s.add_argument("--scale", type=float, default=20.0, help="SVG pixels per unit")
    s.add_argument("--trace", help="write the placement trace to this path")
    s.set_defaults(func=cmd_pack)

    s = sub.add_parser("verify", help="check a packing file for feasibility")
    s.add_argument("packing")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("analyze", help="regions, occupancy, lemma checks and the certificate")
    s.add_argument("instance")
    s.add_argument("--order", choices=ORDERS, default="fqw")
    s.set_defaults(func=cmd_analyze)

    s = sub.add_parser("partition", help="print the FQW partition")
    s.add_argument("instance")
    s.set_defaults(func=cmd_partition)

    s = sub.add_parser("bounds", help="lower bounds and the 13/6 certificate")
    s.add_argument("instance")
    s.set_defaults(func=cmd_bounds)

    s = sub.add_parser("opt", help="exact optimum for tiny instances")
    s.add_argument("instance")
    s.add_argument("--budget", type=int, default=DEFAULT_NODE_BUDGET)
    s.set_defaults(func=cmd_opt)

    s = sub.add_parser("ratio", help="h_BL over the optimum or over the lower bound")
    s.add_argument("instance")
    s.add_argument("--order", choices=ORDERS, default="fqw")
    mode = s.add_mutually_exclusive_group()
    mode.add_argument("--exact", action="store_true", help="divide by the optimum (default)")
    mode.add_argument("--lb", action="store_true", help="divide by the lower bound")
    s.add_argument("--budget", type=int, default=DEFAULT_NODE_BUDGET)
    s.set_defaults(func=cmd_ratio)

    s = sub.add_parser("gen", help="generate an instance or a random corpus")
    s.add_argument("family", choices=sorted(FAMILIES) + ["corpus"])
    s.add_argument("param", nargs="*", help="family parameters as key=value (e.g. w=3 h=4)")
    s.add_argument("--out", help="instance path (default: stdout)")
    s.add_argument("--out-dir", help="corpus directory")
    s.add_argument("--count", type=int, default=100)
    s.add_argument("--seed", type=int, default=1)
    s.add_argument("--squares", action="store_true", help="corpus of squares")
    s.set_defaults(func=cmd_gen)

    s = sub.add_parser("qp-check", help="search the quadratic program for values above 7/12")
    s.add_argument("--k-max", type=int, default=8)
    s.add_argument("--samples", type=int, default=10000)
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(func=cmd_qp_check)

    s = sub.add_parser("render", help="draw a packing file as SVG")
    s.add_argument("packing")
    s.add_argument("--out")
    s.add_argument("--regions", action="store_true")
    s.add_argument("--scale", type=float, default=20.0)
    s.set_defaults(func=cmd_render)

    s = sub.add_parser("bench", help="ratio table over a corpus for several orderings")
    s.add_argument("corpus_dir")
    s.add_argument("--orders", default="all", help="'all' or a comma-separated list")
    s.add_argument("--exact-max-n", type=int, default=6,
                   help="also compare with the optimum up to this many rectangles")
    s.add_argument("--budget", type=int, default=10 ** 6)
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_bench)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (_InputError, StripPackError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except Exception as exc:  # pragma: no cover - reported, not hidden
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    raise SystemExit(main())
