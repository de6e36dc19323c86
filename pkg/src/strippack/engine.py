"""Bottom-Left placement with a full trace and an independent auditor.

The placer enumerates the candidate grid ``({0} + right faces) x ({0} + top
faces)`` of the rectangles already placed, scans it in ``(y, x)`` order and
takes the first feasible point. An optimal position always lies on that grid:
a BL position cannot move down or left, so it rests on the strip bottom or a
top face, and against the left boundary or a right face.

This is O(n^3) overall (O(n^2) candidates times an O(n) overlap scan), fine
for the instances the analysis looks at. Large generated families go through
a second placer that keeps the maximal empty rectangles of the partial
packing: the lowest-leftmost feasible position is always the bottom-left
corner of some maximal empty rectangle large enough for the item (grow the
item's free box until it is maximal; its corner is feasible and no higher or
further right). That placer works on integer-scaled coordinates in numpy
int64 arrays and drops empty rectangles too small for every remaining item.
Both placers are exact and are cross-checked in the tests.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Optional, Sequence, Union

import numpy as np

from .core import Box, Instance, Packing, Placement, Rect, StripPackError, common_denominator
from .ordering import FqwPartition, OrderingKind, fqw_partition, order_rects

LEFT_BOUNDARY = "left-boundary"
BOTTOM_BOUNDARY = "bottom-boundary"


class TraceError(StripPackError):
    """A trace that cannot have come from the BL algorithm."""


@dataclass(frozen=True)
class TraceStep:
    rect_id: str
    x: Fraction
    y: Fraction
    candidates: int = 0
    """Positions considered: grid points (grid placer) or empty rectangles (maxrects)."""


@dataclass(frozen=True)
class PlacementTrace:
    instance: Instance
    steps: tuple[TraceStep, ...]
    kind: Optional[OrderingKind] = None

    @cached_property
    def packing(self) -> Packing:
        return Packing(self.instance, tuple(Placement(s.rect_id, s.x, s.y) for s in self.steps))

    @property
    def order(self) -> list[str]:
        return [s.rect_id for s in self.steps]

    @property
    def height(self) -> Fraction:
        return self.packing.height

    @cached_property
    def position(self) -> dict[str, int]:
        """0-based placement index of each rectangle."""
        return {s.rect_id: i for i, s in enumerate(self.steps)}

    def __len__(self) -> int:
        return len(self.steps)


def _candidate_grid(boxes: Sequence[Box], strip_width: Fraction, w: Fraction):
    xs = {Fraction(0)}
    ys = {Fraction(0)}
    for b in boxes:
        xs.add(b.x + b.w)
        ys.add(b.y + b.h)
    xs = sorted(x for x in xs if x + w <= strip_width)
    return xs, sorted(ys)


def _fits(boxes: Sequence[Box], x, y, w, h) -> bool:
    for b in boxes:
        if x < b.x + b.w and b.x < x + w and y < b.y + b.h and b.y < y + h:
            return False
    return True


def _lowest_leftmost(boxes: Sequence[Box], strip_width: Fraction, rect: Rect):
    if rect.w > strip_width:
        raise StripPackError(f"{rect.id} is wider than the strip")
    xs, ys = _candidate_grid(boxes, strip_width, rect.w)
    count = len(xs) * len(ys)
    for y in ys:
        # Only boxes whose vertical extent meets (y, y + h) can block this row.
        row = [b for b in boxes if y < b.y + b.h and b.y < y + rect.h]
        for x in xs:
            if _fits(row, x, y, rect.w, rect.h):
                return x, y, count
    raise AssertionError("no feasible position on the candidate grid")  # unreachable


def lowest_leftmost_position(prefix: Packing, rect: Rect) -> Placement:
    """The feasible position of ``rect`` minimising ``(y, x)`` given ``prefix``."""
    x, y, _ = _lowest_leftmost(prefix.boxes, prefix.instance.strip_width, rect)
    return Placement(rect.id, x, y)


METHODS = ("auto", "grid", "maxrects")
_AUTO_MAXRECTS_FROM = 64
_INT64_SAFE = 2 ** 62


def _bl_grid(instance: Instance, order: Sequence[str]) -> list[TraceStep]:
    boxes: list[Box] = []
    steps = []
    for rid in order:
        rect = instance.by_id[rid]
        x, y, count = _lowest_leftmost(boxes, instance.strip_width, rect)
        boxes.append(Box(rid, x, y, rect.w, rect.h))
        steps.append(TraceStep(rid, x, y, count))
    return steps


def _integer_scale(instance: Instance) -> Optional[int]:
    """Common denominator, or None if scaled coordinates could overflow int64."""
    values = [instance.strip_width] + [v for r in instance.rects for v in (r.w, r.h)]
    d = common_denominator(values)
    bound = (instance.strip_width + sum((r.h for r in instance.rects), Fraction(0)) + 1) * d
    return d if bound < _INT64_SAFE else None


def _bl_maxrects(instance: Instance, order: Sequence[str], scale: int) -> list[TraceStep]:
    by_id = instance.by_id
    width = int(instance.strip_width * scale)
    sizes = [(int(by_id[r].w * scale), int(by_id[r].h * scale)) for r in order]
    top = sum(h for _, h in sizes) + 1  # stands in for the unbounded top
    n = len(sizes)
    min_w = [top] * (n + 1)
    min_h = [top] * (n + 1)
    for i in range(n - 1, -1, -1):
        min_w[i] = min(min_w[i + 1], sizes[i][0])
        min_h[i] = min(min_h[i + 1], sizes[i][1])

    # Empty rectangles as parallel arrays: left, bottom, right, top.
    fx = np.array([0], dtype=np.int64)
    fy = np.array([0], dtype=np.int64)
    fr = np.array([width], dtype=np.int64)
    ft = np.array([top], dtype=np.int64)
    steps = []
    for i, (rid, (w, h)) in enumerate(zip(order, sizes)):
        fits = np.flatnonzero((fr - fx >= w) & (ft - fy >= h))
        if fits.size == 0:
            raise AssertionError("no empty rectangle fits")  # unreachable: the top one always does
        ys = fy[fits]
        low = fits[ys == ys.min()]
        j = low[np.argmin(fx[low])]
        x, y = int(fx[j]), int(fy[j])
        steps.append(TraceStep(rid, Fraction(x, scale), Fraction(y, scale), int(fx.size)))

        r, t = x + w, y + h
        hit = (fx < r) & (x < fr) & (fy < t) & (y < ft)
        pieces = []
        for k in np.flatnonzero(hit):
            ax, ay, ar, at = int(fx[k]), int(fy[k]), int(fr[k]), int(ft[k])
            if ax < x:
                pieces.append((ax, ay, x, at))
            if r < ar:
                pieces.append((r, ay, ar, at))
            if ay < y:
                pieces.append((ax, ay, ar, y))
            if t < at:
                pieces.append((ax, t, ar, at))
        need_w, need_h = min_w[i + 1], min_h[i + 1]
        keep = ~hit & (fr - fx >= need_w) & (ft - fy >= need_h)
        fx, fy, fr, ft = fx[keep], fy[keep], fr[keep], ft[keep]
        pieces = [p for p in pieces if p[2] - p[0] >= need_w and p[3] - p[1] >= need_h]
        if not pieces:
            continue
        # Old rectangles were maximal and untouched, so only new pieces can be redundant.
        arr = np.array(pieces, dtype=np.int64)
        px, py, pr, pt = (arr[:, c][:, None] for c in range(4))
        in_old = ((fx <= px) & (fy <= py) & (fr >= pr) & (ft >= pt)).any(axis=1)
        inside = (px.T <= px) & (py.T <= py) & (pr.T >= pr) & (pt.T >= pt)  # [a, b]: b holds a
        same = inside & inside.T
        idx = np.arange(len(pieces))
        # Among identical pieces keep the first one.
        inside &= ~same | (idx[None, :] < idx[:, None])
        np.fill_diagonal(inside, False)
        arr = arr[~in_old & ~inside.any(axis=1)]
        fx = np.concatenate([fx, arr[:, 0]])
        fy = np.concatenate([fy, arr[:, 1]])
        fr = np.concatenate([fr, arr[:, 2]])
        ft = np.concatenate([ft, arr[:, 3]])
    return steps


def bl_pack_order(instance: Instance, order: Sequence[str],
                  kind: Optional[OrderingKind] = None, method: str = "auto") -> PlacementTrace:
    """Run BL with an explicit rectangle order.

    ``method`` picks the placer: ``"grid"``, ``"maxrects"`` or ``"auto"``
    (maxrects from 64 rectangles on, when integer scaling fits in int64).
    """
    if method not in METHODS:
        raise ValueError(f"method must be one of {METHODS}")
    if sorted(order) != sorted(instance.by_id):
        raise StripPackError("order must be a permutation of the instance ids")
    for rid in order:
        if instance.by_id[rid].w > instance.strip_width:
            raise StripPackError(f"{rid} is wider than the strip")
    scale = None
    if method == "maxrects" or (method == "auto" and len(order) >= _AUTO_MAXRECTS_FROM):
        scale = _integer_scale(instance)
        if scale is None and method == "maxrects":
            raise StripPackError("coordinates too large for the integer placer")
    steps = _bl_maxrects(instance, order, scale) if scale is not None else _bl_grid(instance, order)
    return PlacementTrace(instance, tuple(steps), kind)


def bl_pack(instance: Instance, kind: Union[OrderingKind, str] = OrderingKind.FQW,
            partition: Optional[FqwPartition] = None, method: str = "auto") -> PlacementTrace:
    kind = OrderingKind(kind)
    return bl_pack_order(instance, order_rects(instance, kind, partition), kind, method)


def bl_height(instance: Instance, kind: Union[OrderingKind, str] = OrderingKind.FQW,
              method: str = "auto") -> Fraction:
    return bl_pack(instance, kind, method=method).height


def supporters(trace: PlacementTrace, rect_id: str) -> tuple[str, str]:
    """Earliest-placed left and bottom supporters of ``rect_id``.

    A supporter is placed earlier, touches the face exactly and shares a
    non-degenerate stretch of it. The boundaries count as supporters.
    """
    pos = trace.position[rect_id]
    boxes = trace.packing.boxes
    me = boxes[pos]
    earlier = boxes[:pos]

    if me.x == 0:
        left = LEFT_BOUNDARY
    else:
        left = next((b.id for b in earlier
                     if b.x + b.w == me.x and b.y < me.y + me.h and me.y < b.y + b.h), None)
    if me.y == 0:
        bottom = BOTTOM_BOUNDARY
    else:
        bottom = next((b.id for b in earlier
                       if b.y + b.h == me.y and b.x < me.x + me.w and me.x < b.x + b.w), None)
    if left is None or bottom is None:
        side = "left" if left is None else "bottom"
        raise TraceError(f"{rect_id} has no {side} supporter; it could slide further")
    return left, bottom


@dataclass(frozen=True)
class AuditReport:
    ok: bool
    step: Optional[int] = None
    """1-based index of the first bad step."""
    rect_id: Optional[str] = None
    chosen: Optional[tuple[Fraction, Fraction]] = None
    better: Optional[tuple[Fraction, Fraction]] = None
    message: str = ""

    def __bool__(self) -> bool:
        return self.ok


def _interior_meets(ax, ay, aw, ah, bx, by, bw, bh) -> bool:
    # Overlap length on each axis; both strictly positive means shared interior.
    dx = min(ax + aw, bx + bw) - max(ax, bx)
    dy = min(ay + ah, by + bh) - max(ay, by)
    return dx > 0 and dy > 0


def audit_bl_minimality(trace: PlacementTrace) -> AuditReport:
    """Re-derive every BL choice from scratch and compare.

    For each step the full grid of corner candidates of the prefix is scanned
    without early exit, each point is re-tested against every earlier box, and
    the lexicographic ``(y, x)`` minimum of the feasible points is compared
    with what the trace recorded.
    """
    inst = trace.instance
    width = inst.strip_width
    placed: list[tuple[Fraction, Fraction, Fraction, Fraction]] = []
    for i, step in enumerate(trace.steps, 1):
        r = inst.by_id[step.rect_id]
        xs = [Fraction(0)] + [px + pw for px, _, pw, _ in placed]
        ys = [Fraction(0)] + [py + ph for _, py, _, ph in placed]
        feasible = [
            (y, x) for x in set(xs) for y in set(ys)
            if x + r.w <= width
            and not any(_interior_meets(x, y, r.w, r.h, *p) for p in placed)
        ]
        best = min(feasible)
        chosen = (step.x, step.y)
        chosen_ok = (step.x >= 0 and step.y >= 0 and step.x + r.w <= width
                     and not any(_interior_meets(step.x, step.y, r.w, r.h, *p) for p in placed))
        if not chosen_ok:
            return AuditReport(False, i, step.rect_id, chosen, (best[1], best[0]),
                               f"step {i}: {step.rect_id} at {chosen} is not feasible")
        if (step.y, step.x) != best:
            return AuditReport(False, i, step.rect_id, chosen, (best[1], best[0]),
                               f"step {i}: {step.rect_id} at ({step.x}, {step.y}) but "
                               f"({best[1]}, {best[0]}) is lower/lefter and feasible")
        placed.append((step.x, step.y, r.w, r.h))
    return AuditReport(True)


def fqw_trace(instance: Instance, method: str = "auto") -> tuple[PlacementTrace, FqwPartition]:
    part = fqw_partition(instance)
    return bl_pack(instance, OrderingKind.FQW, part, method), part
