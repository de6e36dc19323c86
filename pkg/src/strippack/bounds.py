"""Lower bounds on the optimum height and the per-trace 13/6 certificate."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from .core import Instance, StripPackError, format_scalar, total_area
from .engine import PlacementTrace, bl_pack
from .ordering import FqwPartition, OrderingKind, fqw_partition


@dataclass(frozen=True)
class LowerBoundReport:
    lb_hmax: Fraction
    lb_area: Fraction
    lb_wide: Fraction
    """Sum of heights of rectangles wider than half the strip; no two fit side by side."""
    lb_tall: Fraction
    """``2h`` for the largest ``h`` such that rectangles at least ``h`` tall are wider than
    the strip in total: two of them share an x-range, so they stack."""

    @property
    def lb(self) -> Fraction:
        return max(self.lb_hmax, self.lb_area, self.lb_wide, self.lb_tall)

    def to_dict(self) -> dict:
        f = format_scalar
        return {"lb_hmax": f(self.lb_hmax), "lb_area": f(self.lb_area),
                "lb_wide": f(self.lb_wide), "lb_tall": f(self.lb_tall), "lb": f(self.lb)}


def lower_bounds(instance: Instance) -> LowerBoundReport:
    width = instance.strip_width
    lb_wide = sum((r.h for r in instance.rects if 2 * r.w > width), Fraction(0))
    lb_tall = Fraction(0)
    # Scan thresholds from the tallest down; the width sum only grows.
    acc = Fraction(0)
    rects = sorted(instance.rects, key=lambda r: r.h, reverse=True)
    i = 0
    while i < len(rects):
        h = rects[i].h
        while i < len(rects) and rects[i].h == h:
            acc += rects[i].w
            i += 1
        if acc > width:
            lb_tall = 2 * h
            break
    return LowerBoundReport(instance.h_max, total_area(instance) / width, lb_wide, lb_tall)


class CertificateError(StripPackError):
    """A trace on which the structural inequality fails."""


@dataclass(frozen=True)
class Theorem1Certificate:
    branch: str
    """``"degenerate"`` or ``"area"``."""
    ok: bool
    lhs: Fraction
    rhs: Fraction
    """degenerate: ``lhs = h_BL <= rhs = h_max + sum of W heights``;
    area: ``lhs = total area / W >= rhs = h_BL / 2 - h_max / 12``."""

    def __bool__(self) -> bool:
        return self.ok

    def describe(self) -> str:
        if self.branch == "degenerate":
            return f"degenerate branch: h_BL = {self.lhs} <= h_max + h(W) = {self.rhs}"
        return f"area branch: area/W = {self.lhs} >= h_BL/2 - h_max/12 = {self.rhs}"

    def to_dict(self) -> dict:
        return {"branch": self.branch, "ok": self.ok, "lhs": format_scalar(self.lhs),
                "rhs": format_scalar(self.rhs), "statement": self.describe()}


def certify_theorem1(trace: PlacementTrace, partition: Optional[FqwPartition] = None,
                     strict: bool = False) -> Theorem1Certificate:
    """Check the inequality that makes ``h_BL <= 13/6 h_OPT`` without knowing ``h_OPT``.

    With ``strict`` a failing certificate raises :class:`CertificateError`.
    """
    inst = trace.instance
    part = partition if partition is not None else fqw_partition(inst)
    box = trace.packing.box_by_id
    q_top = max((box[q].top for q in part.q_set), default=None)
    h_bl = trace.height
    if q_top is None or q_top <= inst.h_max:
        rhs = inst.h_max + sum((inst.by_id[w].h for w in part.w_set), Fraction(0))
        cert = Theorem1Certificate("degenerate", h_bl <= rhs, h_bl, rhs)
    else:
        lhs = total_area(inst) / inst.strip_width
        rhs = h_bl / 2 - inst.h_max / 12
        cert = Theorem1Certificate("area", lhs >= rhs, lhs, rhs)
    if strict and not cert.ok:
        raise CertificateError(cert.describe() + " does not hold")
    return cert


@dataclass(frozen=True)
class RatioReport:
    h_bl: Fraction
    denominator: Fraction
    source: str
    """``"exact"`` (optimum height) or ``"lower_bound"``."""

    @property
    def value(self) -> Fraction:
        # Both heights are 0 only for the empty instance; call that ratio 1.
        if self.denominator == 0:
            return Fraction(1)
        return self.h_bl / self.denominator

    @property
    def label(self) -> str:
        return "ratio vs optimum" if self.source == "exact" else "ratio vs lower bound"

    def to_dict(self) -> dict:
        return {"h_BL": format_scalar(self.h_bl), "denominator": format_scalar(self.denominator),
                "source": self.source, "label": self.label, "ratio": format_scalar(self.value),
                "ratio_decimal": float(self.value)}


def empirical_ratio(instance: Instance, kind: Union[OrderingKind, str] = OrderingKind.FQW,
                    opt_source: str = "exact", node_budget: Optional[int] = None) -> RatioReport:
    """``h_BL / h_OPT`` (``exact``) or ``h_BL / lb`` (``lower_bound``).

    The lower-bound ratio overstates the true ratio; it is labelled as such.
    Raises :class:`~strippack.oracle.OracleAborted` if the exact search runs out
    of budget.
    """
    h_bl = bl_pack(instance, kind).height
    if opt_source == "lower_bound":
        return RatioReport(h_bl, lower_bounds(instance).lb, "lower_bound")
    if opt_source != "exact":
        raise ValueError("opt_source must be 'exact' or 'lower_bound'")
    from .oracle import OracleAborted, exact_opt
    kwargs = {} if node_budget is None else {"node_budget": node_budget}
    res = exact_opt(instance, **kwargs)
    if res.status != "exact":
        raise OracleAborted(f"exact search stopped after {res.nodes_explored} nodes; "
                            "use the lower-bound ratio instead")
    return RatioReport(h_bl, res.h_opt, "exact")
