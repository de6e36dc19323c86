"""Per-trace checks of the occupancy statements behind the FQW guarantee.

Every check is evaluated exactly on the breakpoint-free bands of the packing.
Indices are 1-based placement positions: ``F = r_1..r_a``,
``Q = r_{a+1}..r_{a+b}``, ``W = r_{a+b+1}..r_n``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from ..core import format_scalar
from ..engine import PlacementTrace
from ..ordering import FqwPartition, OrderingKind, fqw_partition, order_rects
from .regions import (
    HALF,
    AnalysisError,
    LineType,
    band_area,
    elementary_lines,
    line_type,
    profile_of_boxes,
    region_occupancy,
    strip_partition,
)

SPAN_BOUND = Fraction(5, 12)

SUITE_CHECKS = (
    "a_above_f_half", "b_w_regions_half", "c_h_prime_half", "d_above_rl", "e_span_5_12",
    "f_order_monotone", "g_width_monotone", "h_lm_f_supported", "i_order_bounds",
    "outside_span_half", "context_rt_height", "context_rl_height", "context_rb_height",
)


@dataclass(frozen=True)
class Check:
    name: str
    ok: bool
    detail: str = ""
    skipped: bool = False

    def to_dict(self) -> dict:
        return {"check": self.name, "ok": self.ok, "skipped": self.skipped, "detail": self.detail}


@dataclass(frozen=True)
class AnalysisContext:
    a: int
    b: int
    r_t: str
    r_l: str
    r_b: str
    big_l: int
    """1-based placement index of ``r_L``."""
    h_prime: tuple[tuple[Fraction, Fraction], tuple[Fraction, Fraction]]
    span: tuple[Fraction, Fraction]
    """Union of the non-empty regions ``H_{a+2} .. H_L`` as one band (may be empty)."""
    span_fraction: Optional[Fraction]
    """Occupied area of the span over its own area."""
    span_scale: Fraction = Fraction(0)
    """``max(span height, 2 * tallest Q height)``, a lower bound on the optimum height."""
    span_normalized: Optional[Fraction] = None
    """``1 - unoccupied / (W * span_scale)``; the quadratic program bounds this below by 5/12."""

    def to_dict(self) -> dict:
        f = format_scalar
        return {
            "a": self.a, "b": self.b, "r_T": self.r_t, "r_L": self.r_l, "r_B": self.r_b,
            "L": self.big_l,
            "H_prime": [[f(lo), f(hi)] for lo, hi in self.h_prime],
            "span": [f(self.span[0]), f(self.span[1])],
            "span_fraction": None if self.span_fraction is None else f(self.span_fraction),
            "span_scale": f(self.span_scale),
            "span_normalized": None if self.span_normalized is None else f(self.span_normalized),
        }


@dataclass(frozen=True)
class LemmaReport:
    checks: tuple[Check, ...]
    context: Optional[AnalysisContext] = None
    degenerate: bool = False

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def __bool__(self) -> bool:
        return self.ok

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.ok]

    def by_name(self, name: str) -> Check:
        return next(c for c in self.checks if c.name == name)



def gap_width_check(trace: PlacementTrace) -> Check:
    """Just before ``r_i`` is placed, every gap on a proper line of ``H_i`` is narrower than ``r_i``."""
    regions = strip_partition(trace)
    boxes = trace.packing.boxes
    width = trace.instance.strip_width
    n = len(trace)
    for line in elementary_lines(trace, regions):
        if line.region > n:
            continue
        r = boxes[line.region - 1]
        prof = profile_of_boxes(boxes[:line.region - 1], width, line.y)
        wide = [g for g in prof.gaps if g[1] - g[0] >= r.w]
        if wide:
            lo, hi = wide[0]
            return Check("gap_width", False,
                         f"H_{line.region} at y={line.y}: gap ({lo}, {hi}) is not narrower than "
                         f"w({r.id}) = {r.w}")
    return Check("gap_width", True)


def line_occupancy_check(trace: PlacementTrace) -> Check:
    """If a line of ``H_i`` crosses ``k`` rectangles at least as wide as ``r_i`` before it is
    placed, every proper line of ``H_i`` is at least ``k/(2k+1)`` occupied, or half occupied
    when that line had an occupied end."""
    regions = strip_partition(trace)
    boxes = trace.packing.boxes
    width = trace.instance.strip_width
    n = len(trace)
    lines = elementary_lines(trace, regions)
    final = {id(line): profile_of_boxes(boxes, width, line.y).fraction for line in lines}
    by_region: dict[int, list] = {}
    for line in lines:
        by_region.setdefault(line.region, []).append(line)
    for idx, group in by_region.items():
        if idx > n:
            continue
        r = boxes[idx - 1]
        worst = min(final[id(line)] for line in group)
        bound = Fraction(0)
        for line in group:
            before = boxes[:idx - 1]
            crossing = [b for b in before if b.y < line.y < b.y + b.h]
            if not crossing or any(b.w < r.w for b in crossing):
                continue
            k = len(crossing)
            prof = profile_of_boxes(before, width, line.y)
            bound = max(bound, HALF if prof.touches_boundary else Fraction(k, 2 * k + 1))
        if worst < bound:
            return Check("line_occupancy", False,
                         f"H_{idx}: a line is only {worst} occupied, bound {bound}")
    return Check("line_occupancy", True)


def _context(trace: PlacementTrace, part: FqwPartition, regions) -> AnalysisContext:
    inst = trace.instance
    boxes = trace.packing.boxes
    a, b = part.a, part.b
    q_boxes = boxes[a:a + b]
    top = max(q.top for q in q_boxes)
    # Highest top face, then highest bottom face, then earliest placed.
    r_t = next(q for q in q_boxes if q.top == top and q.y == max(p.y for p in q_boxes if p.top == top))
    r_l = next((q for q in q_boxes if q.x == 0), r_t)
    first_q = q_boxes[0]
    under = [p for p in boxes[:a]
             if p.top == first_q.y and p.x < first_q.right and first_q.x < p.right]
    r_b = min(under, key=lambda p: p.x).id if under else "bottom-boundary"
    big_l = trace.position[r_l.id] + 1
    h_t = r_t.h
    h_prime = ((Fraction(0), h_t), (r_t.y, r_t.y + h_t))
    span_regions = [reg for reg in regions if a + 2 <= reg.index <= big_l and not reg.empty]
    width = inst.strip_width
    if span_regions:
        span = (span_regions[0].y_lo, span_regions[-1].y_hi)
        height = span[1] - span[0]
        area = band_area(boxes, [span])
        span_fraction = area / (width * height)
        # Every line set counted by the program has height <= h_r <= h_OPT/2 for
        # some r in Q, and the span itself is at most h_OPT tall.
        scale = max(height, 2 * max(q.h for q in q_boxes))
        normalized = 1 - (width * height - area) / (width * scale)
    else:
        span = (Fraction(0), Fraction(0))
        span_fraction = normalized = None
        scale = Fraction(0)
    return AnalysisContext(a, b, r_t.id, r_l.id, r_b, big_l, h_prime, span, span_fraction,
                           scale, normalized)


def lemma_suite(trace: PlacementTrace, partition: Optional[FqwPartition] = None) -> LemmaReport:
    """Evaluate every occupancy statement on an FQW trace.

    Checks ``a`` to ``i`` follow the structure of the guarantee: the region
    above F, the W regions, the doubled band ``H'`` around the top Q
    rectangle, the regions above ``r_L``, the 5/12 span below ``r_L``, and the
    type statements on lines of that span. ``gap_width`` and
    ``line_occupancy`` hold for every BL trace. The three ``context_*``
    entries are the height facts about ``r_T``, ``r_L`` and ``r_B``, and
    ``outside_span_half`` is the half-occupancy of everything outside the
    span that the final area count relies on.

    In the degenerate case (Q empty, or no Q rectangle reaching above
    ``h_max``) the ratio-2 argument applies instead and only the two
    BL-generic checks are evaluated.
    """
    inst = trace.instance
    part = partition if partition is not None else fqw_partition(inst)
    if trace.order != order_rects(inst, OrderingKind.FQW, part):
        raise AnalysisError("lemma_suite needs a trace in FQW order")
    regions = strip_partition(trace)
    occ = {r.index: r for r in region_occupancy(trace)}
    boxes = trace.packing.boxes
    width = inst.strip_width
    n, a, b = len(trace), part.a, part.b
    checks = [gap_width_check(trace), line_occupancy_check(trace)]

    def half_in(indices, name, label):
        bad = [occ[i] for i in indices if not occ[i].skipped and occ[i].min_fraction < HALF]
        if bad:
            r = bad[0]
            return Check(name, False, f"H_{r.index} has a line only {r.min_fraction} occupied "
                                      f"(band {r.argmin[0]}..{r.argmin[1]}); {label}")
        return Check(name, True)

    degenerate = b == 0 or max(q.top for q in boxes[a:a + b]) <= inst.h_max
    if degenerate:
        reason = "degenerate branch: Q is empty or no Q top face is above h_max"
        skipped = [Check(name, True, reason, skipped=True) for name in SUITE_CHECKS]
        return LemmaReport(tuple(_sorted(checks + skipped)), None, True)

    checks.append(half_in(range(a + b + 2, n + 2), "b_w_regions_half",
                          "regions after the first W rectangle must be half occupied"))
    ctx = _context(trace, part, regions)
    box = trace.packing.box_by_id
    rt, rl = box[ctx.r_t], box[ctx.r_l]

    checks.append(half_in([a + 1], "a_above_f_half", "the region above F must be half occupied"))

    bands = list(ctx.h_prime)
    covered = band_area(boxes, bands)
    lo1, hi1 = bands[0]
    lo2, hi2 = bands[1]
    measure = (hi1 - lo1) + (hi2 - lo2) - max(Fraction(0), min(hi1, hi2) - max(lo1, lo2))
    frac = covered / (width * measure)
    checks.append(Check("c_h_prime_half", frac >= HALF, f"H' is {frac} occupied"))

    bad = []
    for i in range(ctx.big_l + 1, a + b + 1):
        r = occ[i]
        if r.skipped:
            continue
        inside = any(lo <= r.y_lo and r.y_hi <= hi for lo, hi in bands)
        if not inside and r.min_fraction < HALF:
            bad.append(r)
    checks.append(Check("d_above_rl", not bad,
                        "" if not bad else f"H_{bad[0].index} is outside H' and only "
                                           f"{bad[0].min_fraction} occupied"))

    if ctx.span_fraction is None:
        checks.append(Check("e_span_5_12", True, "span H_{a+2}..H_L is empty"))
    else:
        checks.append(Check("e_span_5_12", ctx.span_normalized >= SPAN_BOUND,
                            f"span {ctx.span[0]}..{ctx.span[1]}: unoccupied area is "
                            f"{1 - ctx.span_normalized} of W * {ctx.span_scale} "
                            f"(own area fraction {ctx.span_fraction})"))

    typed = [(line, line_type(trace, line.y, part, regions))
             for line in elementary_lines(trace, regions) if line.region <= n]
    span_types = [t for line, t in typed if a + 2 <= line.region <= ctx.big_l]

    bad_f = next(((s, t) for s, t in zip(span_types, span_types[1:]) if s.order > t.order), None)
    checks.append(Check("f_order_monotone", bad_f is None,
                        "" if bad_f is None else
                        f"order {bad_f[0].order} at y={bad_f[0].y} above order {bad_f[1].order} "
                        f"at y={bad_f[1].y}"))

    checks.append(_width_monotone(inst, [t for _, t in typed]))
    checks.append(_lm_supported(trace, part, span_types))
    checks.append(_order_bounds(trace, span_types))

    if ctx.span_fraction is None:
        rest = [(Fraction(0), trace.height)]
    else:
        rest = [(Fraction(0), ctx.span[0]), (ctx.span[1], trace.height)]
    rest_height = sum((hi - lo for lo, hi in rest), Fraction(0))
    rest_area = band_area(boxes, rest)
    checks.append(Check("outside_span_half", 2 * rest_area >= width * rest_height,
                        f"outside the span: {rest_area} of {width * rest_height} occupied"))

    checks.append(Check("context_rt_height", rt.y >= rt.h,
                        f"y(r_T) = {rt.y}, h(r_T) = {rt.h}"))
    h_rb = box[ctx.r_b].h if ctx.r_b in box else Fraction(0)
    checks.append(Check("context_rl_height", rl.y <= inst.h_max + h_rb,
                        f"y(r_L) = {rl.y}, h_max + h(r_B) = {inst.h_max + h_rb}"))
    tall = [q.id for q in boxes[a:a + b] if q.h > h_rb]
    checks.append(Check("context_rb_height", not tall,
                        "" if not tall else f"{tall[0]} is taller than r_B"))
    return LemmaReport(tuple(_sorted(checks)), ctx, degenerate)


_ORDER = ("gap_width", "line_occupancy", "a_", "b_", "c_", "d_", "e_", "f_", "g_", "h_", "i_",
          "outside_span", "context_")


def _sorted(checks):
    def rank(c):
        return next(i for i, p in enumerate(_ORDER) if c.name.startswith(p))
    return sorted(checks, key=rank)


def _width_monotone(inst, types: list[LineType]) -> Check:
    """For lines l < l', every member of T(l) is at least as wide as each new member of T(l')."""
    w = {r.id: r.w for r in inst.rects}
    for i, low in enumerate(types):
        if not low.members:
            continue
        low_set = set(low.members)
        narrowest = min(w[m] for m in low.members)
        for high in types[i + 1:]:
            new = [m for m in high.members if m not in low_set]
            if new and max(w[m] for m in new) > narrowest:
                m = max(new, key=w.__getitem__)
                return Check("g_width_monotone", False,
                             f"{m} joins at y={high.y} but is wider than a member at y={low.y}")
    return Check("g_width_monotone", True)


def _lm_supported(trace: PlacementTrace, part: FqwPartition, span_types) -> Check:
    box = trace.packing.box_by_id
    f_boxes = [box[f] for f in part.f_set]
    for t in span_types:
        if t.leftmost is None:
            continue
        lm = box[t.leftmost]
        if not any(f.right == lm.x and f.y < lm.top and lm.y < f.top for f in f_boxes):
            return Check("h_lm_f_supported", False,
                         f"LM at y={t.y} ({lm.id}) has no F rectangle as left supporter")
    return Check("h_lm_f_supported", True)


def _order_bounds(trace: PlacementTrace, span_types) -> Check:
    """Lines of order k crossing LM^k are k/(2k+1) occupied, all others half occupied.

    Occupancy is taken just before the first rectangle above the line is placed,
    which is the stricter reading.
    """
    box = trace.packing.box_by_id
    leftmost_by_order: dict[int, str] = {}
    for t in span_types:
        if t.leftmost is None:
            continue
        cur = leftmost_by_order.get(t.order)
        cand = box[t.leftmost]
        if cur is None or (cand.x, -cand.y) < (box[cur].x, -box[cur].y):
            leftmost_by_order[t.order] = cand.id
    for t in span_types:
        k = t.order
        if k and leftmost_by_order.get(k) in t.members:
            bound = Fraction(k, 2 * k + 1)
        else:
            bound = HALF
        if t.fraction_before < bound:
            return Check("i_order_bounds", False,
                         f"line y={t.y} of order {k} is {t.fraction_before} occupied, bound {bound}")
    return Check("i_order_bounds", True)
