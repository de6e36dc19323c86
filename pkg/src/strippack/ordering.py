"""Rectangle orderings for the Bottom-Left engine, including the FQW ordering.

The FQW partition splits an instance into

* ``F``: scanning by decreasing height, every rectangle that still fits next
  to the ones already taken on the strip bottom;
* ``W``: the remaining rectangles wider than half the strip;
* ``Q``: everything else.

All ties are broken by input order so that results are reproducible.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction

from .core import Instance, StripPackError


class OrderingKind(str, enum.Enum):
    DECREASING_WIDTH = "decreasing_width"
    DECREASING_HEIGHT = "decreasing_height"
    INCREASING_WIDTH = "increasing_width"
    INPUT_ORDER = "input_order"
    FQW = "fqw"
    FQW_INCREASING_F = "fqw_increasing_f"

    def __str__(self) -> str:
        return self.value


class PartitionError(StripPackError):
    """Raised when an FQW partition fails one of its defining properties."""


@dataclass(frozen=True)
class FqwPartition:
    f_set: tuple[str, ...]
    q_set: tuple[str, ...]
    w_set: tuple[str, ...]

    @property
    def a(self) -> int:
        return len(self.f_set)

    @property
    def b(self) -> int:
        return len(self.q_set)

    def klass(self, rect_id: str) -> str:
        """``"F"``, ``"Q"`` or ``"W"``."""
        if rect_id in self.f_set:
            return "F"
        if rect_id in self.q_set:
            return "Q"
        if rect_id in self.w_set:
            return "W"
        raise KeyError(rect_id)

    def to_dict(self) -> dict:
        return {"F": list(self.f_set), "Q": list(self.q_set), "W": list(self.w_set),
                "a": self.a, "b": self.b}


def _stable_sorted(instance: Instance, ids, key, reverse: bool = False) -> list[str]:
    # sorted() is stable even with reverse=True, so input order survives ties.
    by_id = instance.by_id
    return sorted(ids, key=lambda i: key(by_id[i]), reverse=reverse)


def fqw_partition(instance: Instance) -> FqwPartition:
    width = instance.strip_width
    by_height = _stable_sorted(instance, [r.id for r in instance.rects],
                               key=lambda r: r.h, reverse=True)
    f_set = []
    used = Fraction(0)
    for rid in by_height:
        w = instance.by_id[rid].w
        if used + w <= width:
            f_set.append(rid)
            used += w
    taken = set(f_set)
    rest = [r for r in instance.rects if r.id not in taken]
    w_set = tuple(r.id for r in rest if 2 * r.w > width)
    q_set = tuple(r.id for r in rest if 2 * r.w <= width)
    # f_set keeps the scan order (decreasing height); callers re-sort as needed.
    return FqwPartition(tuple(f_set), q_set, w_set)


def order_rects(instance: Instance, kind: OrderingKind | str,
                partition: FqwPartition | None = None) -> list[str]:
    kind = OrderingKind(kind)
    ids = [r.id for r in instance.rects]
    if kind is OrderingKind.INPUT_ORDER:
        return ids
    if kind is OrderingKind.DECREASING_WIDTH:
        return _stable_sorted(instance, ids, key=lambda r: r.w, reverse=True)
    if kind is OrderingKind.DECREASING_HEIGHT:
        return _stable_sorted(instance, ids, key=lambda r: r.h, reverse=True)
    if kind is OrderingKind.INCREASING_WIDTH:
        return _stable_sorted(instance, ids, key=lambda r: r.w)

    part = partition if partition is not None else fqw_partition(instance)
    # Re-sort by input index first so ties fall back to input order.
    def in_input_order(group):
        return sorted(group, key=instance.index.__getitem__)

    f_sorted = _stable_sorted(instance, in_input_order(part.f_set), key=lambda r: r.h,
                              reverse=kind is OrderingKind.FQW)
    q_sorted = _stable_sorted(instance, in_input_order(part.q_set), key=lambda r: r.w,
                              reverse=True)
    return f_sorted + q_sorted + in_input_order(part.w_set)


def check_q_height_criterion(instance: Instance, partition: FqwPartition) -> dict[str, Fraction]:
    """Return the witness width sum for every rectangle outside F.

    For r in Q or W the sum ``w_r + sum(w_f : f in F, h_f >= h_r)`` must
    exceed the strip width; that is what forces ``2 h_r <= h_OPT``. Raises
    :class:`PartitionError` on the first rectangle that breaks it.
    """
    by_id = instance.by_id
    width = instance.strip_width
    f_rects = [by_id[f] for f in partition.f_set]
    sums = {}
    for rid in partition.q_set + partition.w_set:
        r = by_id[rid]
        s = r.w + sum((f.w for f in f_rects if f.h >= r.h), Fraction(0))
        if s <= width:
            raise PartitionError(
                f"{rid}: w_r + w(F>=h_r) = {s} does not exceed strip width {width}"
            )
        sums[rid] = s
    return sums


def check_partition(instance: Instance, partition: FqwPartition) -> None:
    """Assert the structural properties of an FQW partition."""
    by_id = instance.by_id
    width = instance.strip_width
    all_ids = partition.f_set + partition.q_set + partition.w_set
    if sorted(all_ids) != sorted(by_id) or len(set(all_ids)) != len(all_ids):
        raise PartitionError("F, Q, W do not partition the rectangles")
    if sum((by_id[f].w for f in partition.f_set), Fraction(0)) > width:
        raise PartitionError("F does not fit side by side on the strip bottom")
    for q in partition.q_set:
        if 2 * by_id[q].w > width:
            raise PartitionError(f"{q} is in Q but wider than half the strip")
    for w in partition.w_set:
        if 2 * by_id[w].w <= width:
            raise PartitionError(f"{w} is in W but not wider than half the strip")
    check_q_height_criterion(instance, partition)
