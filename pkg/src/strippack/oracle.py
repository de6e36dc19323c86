"""Exact optimum heights for tiny instances, and the best BL ordering by brute force.

``exact_opt`` works on the relations between pairs of rectangles. In any
packing two rectangles are separated horizontally (one is left of the other)
or vertically (one is below the other). Conversely, once every pair has such
a relation, placing each rectangle at the longest path to it in the "left of"
and "below" graphs gives a packing, so the optimum is the smallest longest
"below" path over all relation choices whose "left of" paths fit in the strip.
The search branches on one undecided pair at a time, skips pairs already
implied by transitivity, and cuts a branch once it is too wide or at least as
tall as the best packing known. It starts from the lowest BL packing over all
orderings.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .bounds import lower_bounds
from .core import Instance, Packing, Placement, StripPackError, common_denominator, format_scalar
from .engine import bl_pack, bl_pack_order
from .ordering import OrderingKind

DEFAULT_NODE_BUDGET = 10 ** 7


class OracleAborted(StripPackError):
    """The exact search ran out of its node budget."""


@dataclass(frozen=True)
class OptResult:
    h_opt: Fraction
    """Optimum height when exact; otherwise the best height found."""
    witness: Packing
    nodes_explored: int
    status: str
    """``"exact"`` or ``"aborted"``."""
    proven_lower: Fraction
    """Equal to ``h_opt`` when exact; the instance lower bound when aborted."""

    def to_dict(self) -> dict:
        from .io import packing_to_dict
        return {"h_opt": format_scalar(self.h_opt), "status": self.status,
                "nodes_explored": self.nodes_explored,
                "proven_lower": format_scalar(self.proven_lower),
                "witness": packing_to_dict(self.witness)}


class _Budget(Exception):
    pass


class _Optimal(Exception):
    pass


class _RelationSearch:
    def __init__(self, widths: list[int], heights: list[int], strip: int,
                 best: int, lower: int, budget: int):
        self.w, self.h, self.strip = widths, heights, strip
        self.n = n = len(widths)
        self.best, self.best_pos = best, None
        self.lower, self.budget = lower, budget
        self.nodes = 0
        pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
        pairs.sort(key=lambda p: -(widths[p[0]] * heights[p[0]] + widths[p[1]] * heights[p[1]]))
        self.pairs = pairs
        self.same = {(i, j) for i, j in pairs if (widths[i], heights[i]) == (widths[j], heights[j])}

    def _paths(self, reach: list[int], size: list[int]) -> list[int]:
        # With positive sizes the transitive closure gives the same longest paths
        # as the direct edges; sources first, by number of predecessors.
        n = self.n
        preds = [[i for i in range(n) if reach[i] >> j & 1] for j in range(n)]
        pos = [0] * n
        for j in sorted(range(n), key=lambda j: len(preds[j])):
            pos[j] = max((pos[i] + size[i] for i in preds[j]), default=0)
        return pos

    @staticmethod
    def _add(reach: list[int], u: int, v: int) -> list[int]:
        out = list(reach)
        add = reach[v] | (1 << v)
        for a in range(len(reach)):
            if a == u or reach[a] >> u & 1:
                out[a] |= add
        return out

    def run(self) -> None:
        n = self.n
        try:
            self._search(0, [0] * n, [0] * n)
        except _Optimal:
            pass

    def _search(self, k: int, rx: list[int], ry: list[int]) -> None:
        self.nodes += 1
        if self.nodes > self.budget:
            raise _Budget
        pairs = self.pairs
        while k < len(pairs):
            i, j = pairs[k]
            if (rx[i] >> j | rx[j] >> i | ry[i] >> j | ry[j] >> i) & 1:
                k += 1
                continue
            break
        else:
            xs = self._paths(rx, self.w)
            ys = self._paths(ry, self.h)
            height = max(y + h for y, h in zip(ys, self.h))
            if height < self.best:
                self.best, self.best_pos = height, (xs, ys)
                if height <= self.lower:
                    raise _Optimal
            return
        # Identical rectangles can be relabelled in order of y, so the later one
        # is never below the earlier one. Mirroring in x keeps every y, so after
        # that relabelling the first pair still needs only one "left of" direction.
        options = [("x", i, j)]
        if k > 0:
            options.append(("x", j, i))
        options.append(("y", i, j))
        if (i, j) not in self.same:
            options.append(("y", j, i))
        for axis, u, v in options:
            if axis == "x":
                nrx = self._add(rx, u, v)
                xs = self._paths(nrx, self.w)
                if any(x + w > self.strip for x, w in zip(xs, self.w)):
                    continue
                self._search(k + 1, nrx, ry)
            else:
                nry = self._add(ry, u, v)
                ys = self._paths(nry, self.h)
                if any(y + h >= self.best for y, h in zip(ys, self.h)):
                    continue
                self._search(k + 1, rx, nry)


def exact_opt(instance: Instance, node_budget: int = DEFAULT_NODE_BUDGET) -> OptResult:
    """Minimum packing height, with a witness packing.

    Intended for about seven rectangles. When the budget runs out the result
    is ``aborted`` and carries the best packing found.
    """
    if not instance.rects:
        return OptResult(Fraction(0), Packing(instance, ()), 0, "exact", Fraction(0))
    scale = common_denominator([instance.strip_width] + [v for r in instance.rects
                                                         for v in (r.w, r.h)])
    widths = [int(r.w * scale) for r in instance.rects]
    heights = [int(r.h * scale) for r in instance.rects]

    best: Optional[Packing] = None
    for kind in OrderingKind:
        p = bl_pack(instance, kind).packing
        if best is None or p.height < best.height:
            best = p
    lb = lower_bounds(instance).lb
    lower = math.ceil(lb * scale)
    upper = int(best.height * scale)
    if upper <= lower:
        return OptResult(best.height, best, 0, "exact", best.height)

    search = _RelationSearch(widths, heights, int(instance.strip_width * scale),
                             upper, lower, node_budget)
    status = "exact"
    try:
        search.run()
    except _Budget:
        status = "aborted"
    if search.best_pos is not None:
        xs, ys = search.best_pos
        best = Packing(instance, tuple(
            Placement(r.id, Fraction(x, scale), Fraction(y, scale))
            for r, x, y in zip(instance.rects, xs, ys)))
    proven = best.height if status == "exact" else lb
    return OptResult(best.height, best, search.nodes, status, proven)


def best_permutation_bl(instance: Instance, max_n: int = 9) -> tuple[list[str], Fraction]:
    """The first permutation (in lexicographic order of input positions) with minimum BL height."""
    n = len(instance.rects)
    if n > max_n:
        raise StripPackError(f"{n} rectangles means {math.factorial(n)} orderings; "
                             f"the limit is {max_n} (raise max_n to override)")
    ids = [r.id for r in instance.rects]
    best_perm, best_h = list(ids), None
    for perm in itertools.permutations(ids):
        h = bl_pack_order(instance, perm, method="grid").height
        if best_h is None or h < best_h:
            best_perm, best_h = list(perm), h
    return best_perm, (best_h if best_h is not None else Fraction(0))
