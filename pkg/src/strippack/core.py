"""Exact geometric primitives for strip packing.

Every length is a :class:`fractions.Fraction`. Nothing in here touches
floating point; equality and touching tests are exact.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from decimal import Decimal, InvalidOperation
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence, Union

Scalar = Fraction
ScalarLike = Union[int, str, Decimal, Fraction]

_RATIO_RE = re.compile(r"^\s*([+-]?\d+)\s*/\s*(\d+)\s*$")


class StripPackError(Exception):
    """Base class for all errors raised by this package."""


class InstanceError(StripPackError, ValueError):
    """Malformed instance data: bad literal, non-positive size, duplicate id."""


class PackingStructureError(StripPackError, ValueError):
    """A packing that does not place each instance rectangle exactly once."""


def to_scalar(value: ScalarLike) -> Fraction:
    """Convert an integer, finite decimal, ``"p/q"`` string or Fraction.

    Binary floats are refused: a float literal has already lost the value
    the user typed. Parse JSON with ``parse_float=Decimal`` instead.
    """
    if isinstance(value, bool):
        raise InstanceError(f"booleans are not numbers: {value!r}")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, Decimal):
        if not value.is_finite():
            raise InstanceError(f"non-finite number: {value}")
        return Fraction(value)
    if isinstance(value, float):
        raise InstanceError(
            f"float {value!r} is not exact; pass it as a string or Decimal"
        )
    if isinstance(value, str):
        m = _RATIO_RE.match(value)
        if m:
            num, den = int(m.group(1)), int(m.group(2))
            if den == 0:
                raise InstanceError(f"zero denominator in {value!r}")
            return Fraction(num, den)
        try:
            dec = Decimal(value.strip())
        except InvalidOperation:
            raise InstanceError(f"cannot parse number {value!r}") from None
        if not dec.is_finite():
            raise InstanceError(f"non-finite number: {value!r}")
        return Fraction(dec)
    raise InstanceError(f"unsupported numeric type {type(value).__name__}")


def format_scalar(value: Fraction) -> Union[int, str]:
    """Lossless JSON encoding: plain int when integral, else ``"p/q"``."""
    if value.denominator == 1:
        return value.numerator
    return f"{value.numerator}/{value.denominator}"


def common_denominator(values: Iterable[Fraction]) -> int:
    """Least common multiple of the denominators (1 for no values)."""
    d = 1
    for v in values:
        d = d * v.denominator // math.gcd(d, v.denominator)
    return d


@dataclass(frozen=True)
class Rect:
    id: str
    w: Fraction
    h: Fraction

    def __post_init__(self):
        object.__setattr__(self, "w", to_scalar(self.w))
        object.__setattr__(self, "h", to_scalar(self.h))
        if self.w <= 0 or self.h <= 0:
            raise InstanceError(
                f"rectangle {self.id!r} must have positive size, got {self.w} x {self.h}"
            )

    @property
    def area(self) -> Fraction:
        return self.w * self.h


@dataclass(frozen=True)
class Instance:
    """A strip of width ``strip_width`` and an ordered tuple of rectangles.

    Input order matters: it is the tie-breaker for every ordering.
    """

    strip_width: Fraction
    rects: tuple[Rect, ...] = ()

    def __post_init__(self):
        width = to_scalar(self.strip_width)
        object.__setattr__(self, "strip_width", width)
        object.__setattr__(self, "rects", tuple(self.rects))
        if width <= 0:
            raise InstanceError(f"strip width must be positive, got {width}")
        seen = set()
        for r in self.rects:
            if r.id in seen:
                raise InstanceError(f"duplicate rectangle id {r.id!r}")
            seen.add(r.id)
            if r.w > width:
                raise InstanceError(
                    f"rectangle {r.id!r} of width {r.w} does not fit the strip ({width})"
                )

    @classmethod
    def from_sizes(cls, width: ScalarLike, sizes: Sequence[tuple[ScalarLike, ScalarLike]],
                   prefix: str = "r") -> "Instance":
        """Build an instance with ids ``r1, r2, ...`` from ``(w, h)`` pairs."""
        rects = tuple(Rect(f"{prefix}{i}", w, h) for i, (w, h) in enumerate(sizes, 1))
        return cls(to_scalar(width), rects)

    @cached_property
    def by_id(self) -> dict[str, Rect]:
        return {r.id: r for r in self.rects}

    @cached_property
    def index(self) -> dict[str, int]:
        """Position of each id in the input order."""
        return {r.id: i for i, r in enumerate(self.rects)}

    def __len__(self) -> int:
        return len(self.rects)

    @property
    def h_max(self) -> Fraction:
        return max((r.h for r in self.rects), default=Fraction(0))

    def reordered(self, ids: Sequence[str]) -> "Instance":
        return Instance(self.strip_width, tuple(self.by_id[i] for i in ids))


@dataclass(frozen=True)
class Placement:
    rect_id: str
    x: Fraction
    y: Fraction

    def __post_init__(self):
        object.__setattr__(self, "x", to_scalar(self.x))
        object.__setattr__(self, "y", to_scalar(self.y))


@dataclass(frozen=True)
class Box:
    """A placed rectangle as a closed axis-parallel box."""

    id: str
    x: Fraction
    y: Fraction
    w: Fraction
    h: Fraction

    @property
    def right(self) -> Fraction:
        return self.x + self.w

    @property
    def top(self) -> Fraction:
        return self.y + self.h

    def overlaps(self, other: "Box") -> bool:
        """True iff the open interiors intersect; shared edges do not count."""
        return (self.x < other.x + other.w and other.x < self.x + self.w
                and self.y < other.y + other.h and other.y < self.y + self.h)


@dataclass(frozen=True)
class Packing:
    """Positions for (a prefix of) an instance's rectangles.

    ``placements`` are kept in placement order. A packing that does not yet
    place every rectangle is a *partial* packing; it is what the engine works
    on while it runs.
    """

    instance: Instance
    placements: tuple[Placement, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "placements", tuple(self.placements))
        seen = set()
        for p in self.placements:
            if p.rect_id not in self.instance.by_id:
                raise PackingStructureError(f"unknown rectangle id {p.rect_id!r}")
            if p.rect_id in seen:
                raise PackingStructureError(f"rectangle {p.rect_id!r} placed twice")
            seen.add(p.rect_id)

    @cached_property
    def boxes(self) -> tuple[Box, ...]:
        by_id = self.instance.by_id
        return tuple(Box(p.rect_id, p.x, p.y, by_id[p.rect_id].w, by_id[p.rect_id].h)
                     for p in self.placements)

    @cached_property
    def box_by_id(self) -> dict[str, Box]:
        return {b.id: b for b in self.boxes}

    @property
    def is_complete(self) -> bool:
        return len(self.placements) == len(self.instance.rects)

    @property
    def height(self) -> Fraction:
        return packing_height(self)

    def prefix(self, k: int) -> "Packing":
        return Packing(self.instance, self.placements[:k])

    def appended(self, placement: Placement) -> "Packing":
        return Packing(self.instance, self.placements + (placement,))


@dataclass(frozen=True)
class FeasibilityReport:
    ok: bool
    violations: tuple[str, ...] = field(default=())
    overlapping_pairs: tuple[tuple[str, str], ...] = field(default=())

    def __bool__(self) -> bool:
        return self.ok


def verify_feasible(packing: Packing, require_complete: bool = True) -> FeasibilityReport:
    """Check that every box lies in the strip and no two interiors meet.

    Structural problems (unknown or duplicate ids) are raised by
    :class:`Packing` itself; a missing rectangle raises here unless
    ``require_complete`` is false.
    """
    if require_complete and not packing.is_complete:
        placed = {p.rect_id for p in packing.placements}
        missing = [r.id for r in packing.instance.rects if r.id not in placed]
        raise PackingStructureError(f"rectangles not placed: {', '.join(missing)}")

    width = packing.instance.strip_width
    violations = []
    pairs = []
    boxes = packing.boxes
    for b in boxes:
        if b.x < 0:
            violations.append(f"{b.id}: left face at x={b.x} is outside the strip")
        if b.right > width:
            violations.append(f"{b.id}: right face at x={b.right} exceeds strip width {width}")
        if b.y < 0:
            violations.append(f"{b.id}: bottom face at y={b.y} is below the strip")
    # Sweep over x: only boxes whose x-extents meet can overlap.
    index = packing.instance.index
    active: list[Box] = []
    for b in sorted(boxes, key=lambda b: b.x):
        active = [a for a in active if a.right > b.x]
        for a in active:
            if a.overlaps(b):
                pairs.append(tuple(sorted((a.id, b.id), key=index.__getitem__)))
        active.append(b)
    pairs.sort(key=lambda p: (index[p[0]], index[p[1]]))
    violations += [f"{a} and {b} overlap" for a, b in pairs]
    return FeasibilityReport(not violations, tuple(violations), tuple(pairs))


def packing_height(packing: Packing) -> Fraction:
    return max((b.top for b in packing.boxes), default=Fraction(0))


def total_area(instance: Instance) -> Fraction:
    return sum((r.area for r in instance.rects), Fraction(0))
