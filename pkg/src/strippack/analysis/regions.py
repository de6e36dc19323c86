"""Horizontal strip partition and exact line occupancy.

Region ``H_i`` (1-based) is the band between the highest bottom face among
``r_1 .. r_{i-1}`` and the bottom face of ``r_i``; ``H_{n+1}`` runs from the
highest bottom face to the top of the packing. Occupancy of a horizontal line
only changes at face coordinates, so every statement "for all proper lines in
a band" is decided by one midpoint per breakpoint-free interval.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from ..core import Box, Packing, StripPackError, format_scalar
from ..engine import PlacementTrace
from ..ordering import FqwPartition, fqw_partition

HALF = Fraction(1, 2)


class AnalysisError(StripPackError):
    """A query outside the domain where a quantity is defined."""


class ImproperLineError(AnalysisError, ValueError):
    """The requested line runs along a top or bottom face."""


@dataclass(frozen=True)
class StripRegion:
    index: int
    y_lo: Fraction
    y_hi: Fraction
    rect_id: Optional[str]
    """The rectangle whose bottom face bounds the region; None for the top region."""

    @property
    def empty(self) -> bool:
        return self.y_hi <= self.y_lo

    @property
    def height(self) -> Fraction:
        return max(self.y_hi - self.y_lo, Fraction(0))

    def contains(self, y: Fraction) -> bool:
        """Open-interval test; proper lines never sit on region bounds."""
        return self.y_lo < y < self.y_hi

    def to_dict(self) -> dict:
        return {"index": self.index, "y_lo": format_scalar(self.y_lo),
                "y_hi": format_scalar(self.y_hi), "rect": self.rect_id, "empty": self.empty}


def strip_partition(trace: PlacementTrace) -> list[StripRegion]:
    regions = []
    highest = Fraction(0)
    for i, step in enumerate(trace.steps, 1):
        regions.append(StripRegion(i, highest, step.y, step.rect_id))
        highest = max(highest, step.y)
    regions.append(StripRegion(len(trace.steps) + 1, highest, trace.height, None))
    return regions


@dataclass(frozen=True)
class LineProfile:
    y: Fraction
    width: Fraction
    occupied: tuple[tuple[Fraction, Fraction], ...]
    gaps: tuple[tuple[Fraction, Fraction], ...]

    @property
    def occupied_length(self) -> Fraction:
        return sum((hi - lo for lo, hi in self.occupied), Fraction(0))

    @property
    def fraction(self) -> Fraction:
        return self.occupied_length / self.width

    @property
    def touches_boundary(self) -> bool:
        """True if an occupied interval reaches x = 0 or x = W."""
        return bool(self.occupied) and (self.occupied[0][0] == 0
                                        or self.occupied[-1][1] == self.width)

    def occupied_right_of(self, x: Fraction) -> Fraction:
        return sum((hi - max(lo, x) for lo, hi in self.occupied if hi > x), Fraction(0))


def _merge(intervals) -> list[tuple[Fraction, Fraction]]:
    merged: list[list[Fraction]] = []
    for lo, hi in sorted(intervals):
        if merged and lo <= merged[-1][1]:
            merged[-1][1] = max(merged[-1][1], hi)
        else:
            merged.append([lo, hi])
    return [(lo, hi) for lo, hi in merged]


def profile_of_boxes(boxes: Sequence[Box], width: Fraction, y: Fraction) -> LineProfile:
    """Profile of the line at height ``y`` through ``boxes`` (no properness check)."""
    occupied = _merge((b.x, b.x + b.w) for b in boxes if b.y < y < b.y + b.h)
    gaps = []
    cursor = Fraction(0)
    for lo, hi in occupied:
        if lo > cursor:
            gaps.append((cursor, lo))
        cursor = hi
    if cursor < width:
        gaps.append((cursor, width))
    return LineProfile(y, width, tuple(occupied), tuple(gaps))


def line_profile(packing: Packing, y, upto_step: Optional[int] = None) -> LineProfile:
    """Occupancy of the line at height ``y`` by the first ``upto_step`` rectangles.

    Raises :class:`ImproperLineError` if ``y`` is a top or bottom face of one
    of those rectangles.
    """
    y = Fraction(y)
    boxes = packing.boxes if upto_step is None else packing.boxes[:upto_step]
    for b in boxes:
        if y == b.y or y == b.y + b.h:
            raise ImproperLineError(f"y={y} lies on a face of {b.id}; pick an interior height")
    return profile_of_boxes(boxes, packing.instance.strip_width, y)


def region_of(regions: Sequence[StripRegion], y: Fraction) -> StripRegion:
    for reg in regions:
        if reg.contains(y):
            return reg
    raise AnalysisError(f"y={y} is not inside any region (outside the packing or on a bound)")


@dataclass(frozen=True)
class ElementaryLine:
    """A breakpoint-free open band ``(lo, hi)`` and the region holding it."""

    lo: Fraction
    hi: Fraction
    region: int

    @property
    def y(self) -> Fraction:
        return (self.lo + self.hi) / 2


def elementary_lines(trace: PlacementTrace,
                     regions: Optional[Sequence[StripRegion]] = None) -> list[ElementaryLine]:
    """One representative per maximal band free of faces and region bounds, bottom up."""
    regions = list(regions) if regions is not None else strip_partition(trace)
    cuts = {Fraction(0), trace.height}
    for b in trace.packing.boxes:
        cuts.add(b.y)
        cuts.add(b.y + b.h)
    for reg in regions:
        cuts.add(reg.y_lo)
        cuts.add(reg.y_hi)
    cuts = sorted(c for c in cuts if 0 <= c <= trace.height)
    nonempty = [r for r in regions if not r.empty]
    starts = [r.y_lo for r in nonempty]
    lines = []
    for lo, hi in zip(cuts, cuts[1:]):
        j = bisect.bisect_right(starts, lo) - 1
        lines.append(ElementaryLine(lo, hi, nonempty[j].index))
    return lines


@dataclass(frozen=True)
class RegionOccupancy:
    index: int
    y_lo: Fraction
    y_hi: Fraction
    min_fraction: Optional[Fraction]
    """Minimum over proper lines; None for an empty (skipped) region."""
    argmin: Optional[tuple[Fraction, Fraction]] = None
    """The breakpoint-free band where the minimum is attained."""

    @property
    def skipped(self) -> bool:
        return self.min_fraction is None


def region_occupancy(trace: PlacementTrace) -> list[RegionOccupancy]:
    regions = strip_partition(trace)
    boxes = trace.packing.boxes
    width = trace.instance.strip_width
    best: dict[int, tuple[Fraction, tuple]] = {}
    for line in elementary_lines(trace, regions):
        frac = profile_of_boxes(boxes, width, line.y).fraction
        if line.region not in best or frac < best[line.region][0]:
            best[line.region] = (frac, (line.lo, line.hi))
    report = []
    for reg in regions:
        if reg.index in best:
            frac, band = best[reg.index]
            report.append(RegionOccupancy(reg.index, reg.y_lo, reg.y_hi, frac, band))
        else:
            report.append(RegionOccupancy(reg.index, reg.y_lo, reg.y_hi, None))
    return report


def band_area(boxes: Sequence[Box], bands: Sequence[tuple[Fraction, Fraction]]) -> Fraction:
    """Area of ``boxes`` inside the union of horizontal ``bands``."""
    total = Fraction(0)
    for lo, hi in _merge(bands):
        for b in boxes:
            overlap = min(hi, b.y + b.h) - max(lo, b.y)
            if overlap > 0:
                total += overlap * b.w
    return total


@dataclass(frozen=True)
class LineType:
    y: Fraction
    region: int
    members: tuple[str, ...]
    """Q rectangles crossing the line before ``r_i`` is placed, left to right."""
    x_f: Fraction
    """Right face of the rightmost F rectangle crossing the line, 0 if none."""
    fraction_before: Fraction
    """Occupancy just before the region's bounding rectangle is placed."""
    x_split: Optional[Fraction] = None
    beta: Optional[Fraction] = None

    @property
    def order(self) -> int:
        return len(self.members)

    @property
    def leftmost(self) -> Optional[str]:
        return self.members[0] if self.members else None


def _half_split(profile: LineProfile, lo: Fraction, hi: Fraction) -> Optional[Fraction]:
    """First x in [lo, hi] with occupancy right of x equal to half of ``W - x``."""
    width = profile.width

    def excess(x):
        return profile.occupied_right_of(x) - (width - x) / 2

    points = sorted({lo, hi} | {e for iv in profile.occupied for e in iv if lo < e < hi})
    prev = points[0]
    g_prev = excess(prev)
    if g_prev == 0:
        return prev
    for p in points[1:]:
        g = excess(p)
        if g_prev < 0 <= g or g_prev > 0 >= g:
            # excess is linear between consecutive interval endpoints
            return prev + (p - prev) * (-g_prev) / (g - g_prev)
        prev, g_prev = p, g
    return None


def line_type(trace: PlacementTrace, y, partition: Optional[FqwPartition] = None,
              regions: Optional[Sequence[StripRegion]] = None) -> LineType:
    """Type of the proper line at ``y``: the Q rectangles crossing it before the
    first rectangle above it is placed, plus the split point of its gap measure.

    ``beta`` is only reported for lines less than half occupied at that moment.
    """
    y = Fraction(y)
    part = partition if partition is not None else fqw_partition(trace.instance)
    regions = regions if regions is not None else strip_partition(trace)
    reg = region_of(regions, y)
    if reg.rect_id is None:
        raise AnalysisError(f"y={y} is in the top region; no rectangle is placed above it")
    packing = trace.packing
    before = packing.boxes[:reg.index - 1]
    for b in before:
        if y == b.y or y == b.y + b.h:
            raise ImproperLineError(f"y={y} lies on a face of {b.id}")
    crossing = [b for b in before if b.y < y < b.y + b.h]
    q_set, f_set = set(part.q_set), set(part.f_set)
    members = sorted((b for b in crossing if b.id in q_set), key=lambda b: b.x)
    f_cross = [b for b in crossing if b.id in f_set]
    x_f = max(f_cross, key=lambda b: b.x).right if f_cross else Fraction(0)
    profile = profile_of_boxes(before, trace.instance.strip_width, y)
    x_split = beta = None
    if members and profile.fraction < HALF:
        x_split = _half_split(profile, x_f, members[0].x)
        if x_split is not None:
            beta = x_split - x_f
    return LineType(y, reg.index, tuple(b.id for b in members), x_f, profile.fraction,
                    x_split, beta)
