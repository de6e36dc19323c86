from fractions import Fraction

import pytest

from strippack.core import Instance, Packing, Placement, verify_feasible
from strippack.engine import (
    BOTTOM_BOUNDARY,
    LEFT_BOUNDARY,
    PlacementTrace,
    TraceError,
    TraceStep,
    audit_bl_minimality,
    bl_height,
    bl_pack,
    bl_pack_order,
    fqw_trace,
    lowest_leftmost_position,
    supporters,
)
from strippack.generators import (
    FIGURE1_POSITIONS,
    figure1,
    figure1_packing,
    figure5,
    random_rects,
)
from strippack.ordering import OrderingKind


def test_figure1_fqw_reproduces_the_drawing():
    trace = bl_pack(figure1(), "fqw")
    got = [(s.x, s.y) for s in trace.steps]
    assert got == [(Fraction(x), Fraction(y)) for x, y in FIGURE1_POSITIONS]
    assert trace.height == 25
    assert trace.packing == figure1_packing()


def test_figure5_fqw():
    trace, _ = fqw_trace(figure5(3, 4))
    assert [(s.rect_id, s.x, s.y) for s in trace.steps] == [
        ("r1", 0, 0), ("r2", 3, 0), ("r3", 3, 4), ("r4", 0, 8), ("r5", 4, 8)]
    assert trace.height == 12


def test_lowest_leftmost_examples():
    prefix = figure1_packing().prefix(12)
    assert lowest_leftmost_position(prefix, figure1().by_id["r13"]) == Placement("r13", 14, 5)
    inst = Instance.from_sizes(9, [(4, 4), (5, 2)])
    empty = Packing(inst, ())
    assert lowest_leftmost_position(empty, inst.rects[0]) == Placement("r1", 0, 0)
    one = Packing(inst, (Placement("r1", 0, 0),))
    assert lowest_leftmost_position(one, inst.rects[1]) == Placement("r2", 4, 0)


def test_one_rect():
    trace = bl_pack(Instance.from_sizes(5, [(2, 7)]))
    assert trace.steps[0].x == 0 and trace.steps[0].y == 0 and trace.height == 7


def test_empty_instance():
    assert bl_height(Instance(Fraction(3), ())) == 0


def test_supporters():
    trace = bl_pack(figure1(), "fqw")
    assert supporters(trace, "r13") == ("r5", "r6")
    assert supporters(trace, "r1") == (LEFT_BOUNDARY, BOTTOM_BOUNDARY)
    t5, _ = fqw_trace(figure5())
    assert supporters(t5, "r4") == (LEFT_BOUNDARY, "r3")


def test_floating_rect_has_no_supporter():
    inst = Instance.from_sizes(5, [(1, 1)])
    trace = PlacementTrace(inst, (TraceStep("r1", Fraction(1), Fraction(0)),))
    with pytest.raises(TraceError):
        supporters(trace, "r1")


def test_audit_flags_a_raised_rect():
    good, _ = fqw_trace(figure5())
    assert audit_bl_minimality(good).ok
    steps = list(good.steps)
    steps[1] = TraceStep("r2", Fraction(3), Fraction(1))
    rep = audit_bl_minimality(PlacementTrace(good.instance, tuple(steps)))
    assert not rep.ok and rep.step == 2
    assert rep.better == (3, 0)


def test_order_must_be_a_permutation():
    with pytest.raises(Exception):
        bl_pack_order(figure5(), ["r1", "r2"])


def test_deterministic():
    inst = random_rects(14, 3)
    assert bl_pack(inst, "fqw").steps == bl_pack(inst, "fqw").steps


@pytest.mark.parametrize("seed", range(60))
def test_grid_and_maxrects_placers_agree(seed):
    inst = random_rects(8 + seed % 9, seed, width=7 + seed % 6, w_range=(1, 6), h_range=(1, 9))
    for kind in OrderingKind:
        a = bl_pack(inst, kind, method="grid")
        b = bl_pack(inst, kind, method="maxrects")
        assert [(s.x, s.y) for s in a.steps] == [(s.x, s.y) for s in b.steps]


def test_placers_agree_on_fractions():
    inst = Instance.from_sizes("7/2", [("3/2", "1/3"), ("1/2", "5/4"), (2, "2/7"), ("7/4", 1),
                                       ("1/3", "1/3"), ("5/6", "3/2")])
    for kind in OrderingKind:
        a = bl_pack(inst, kind, method="grid")
        b = bl_pack(inst, kind, method="maxrects")
        assert a.steps[-1].x == b.steps[-1].x
        assert [(s.x, s.y) for s in a.steps] == [(s.x, s.y) for s in b.steps]


@pytest.mark.parametrize("seed", range(40))
def test_every_trace_is_feasible_supported_and_minimal(seed):
    inst = random_rects(1 + seed % 12, seed + 100, width=6 + seed % 7)
    for kind in OrderingKind:
        trace = bl_pack(inst, kind)
        assert verify_feasible(trace.packing).ok
        assert audit_bl_minimality(trace).ok
        for s in trace.steps:
            supporters(trace, s.rect_id)
