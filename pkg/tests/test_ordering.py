import random
from fractions import Fraction

import pytest

from strippack.core import Instance
from strippack.engine import bl_pack_order
from strippack.generators import figure1, figure5, random_rects, random_squares
from strippack.ordering import (
    FqwPartition,
    OrderingKind,
    PartitionError,
    check_partition,
    check_q_height_criterion,
    fqw_partition,
    order_rects,
)


def test_figure1_partition():
    part = fqw_partition(figure1())
    assert sorted(part.f_set) == [f"r{i}" for i in range(1, 7)]
    assert part.q_set == tuple(f"r{i}" for i in range(7, 14))
    assert part.w_set == ("r14", "r15")
    assert (part.a, part.b) == (6, 7)
    check_partition(figure1(), part)


def test_figure5_partition():
    part = fqw_partition(figure5(3, 4))
    assert set(part.f_set) == {"r1", "r2"}
    assert part.q_set == ("r3", "r4", "r5")
    assert part.w_set == ()
    assert part.to_dict() == {"F": ["r1", "r2"], "Q": ["r3", "r4", "r5"], "W": [], "a": 2, "b": 3}


def test_single_rect_goes_to_f():
    part = fqw_partition(Instance.from_sizes(5, [(5, 2)]))
    assert part.f_set == ("r1",) and part.q_set == () and part.w_set == ()


def test_figure1_fqw_order_is_index_order():
    assert order_rects(figure1(), "fqw") == [f"r{i}" for i in range(1, 16)]


def test_fqw_increasing_f_reverses_f_only():
    order = order_rects(figure1(), OrderingKind.FQW_INCREASING_F)
    assert order[:6] == ["r6", "r5", "r4", "r3", "r2", "r1"]
    assert order[6:] == [f"r{i}" for i in range(7, 16)]


def test_classical_orders_break_ties_by_input():
    inst = Instance.from_sizes(5, [(2, 9), (5, 1), (5, 9)])
    assert order_rects(inst, "decreasing_width") == ["r2", "r3", "r1"]
    assert order_rects(inst, "decreasing_height") == ["r1", "r3", "r2"]
    assert order_rects(inst, "increasing_width") == ["r1", "r2", "r3"]
    assert order_rects(inst, "input_order") == ["r1", "r2", "r3"]


def test_q_height_criterion_values():
    crit = check_q_height_criterion(figure1(), fqw_partition(figure1()))
    # w(F) is 3+2+1+5+3+1 = 15, and every F rectangle is at least 4 tall
    assert crit["r7"] == 23
    crit5 = check_q_height_criterion(figure5(), fqw_partition(figure5()))
    assert crit5["r4"] == 11
    f_only = Instance.from_sizes(10, [(3, 2), (3, 1)])
    assert check_q_height_criterion(f_only, fqw_partition(f_only)) == {}


def test_broken_partition_is_reported():
    inst = figure5()
    with pytest.raises(PartitionError):
        check_partition(inst, FqwPartition(("r1",), ("r2", "r3", "r4", "r5"), ()))


@pytest.mark.parametrize("seed", range(30))
def test_every_kind_is_a_permutation(seed):
    inst = random_rects(12, seed, width=12)
    ids = sorted(r.id for r in inst.rects)
    for kind in OrderingKind:
        assert sorted(order_rects(inst, kind)) == ids
    check_partition(inst, fqw_partition(inst))


@pytest.mark.parametrize("seed", range(60))
def test_squares_fqw_packs_f_and_q_like_decreasing_size(seed):
    # The order lists differ (F may take a small square after skipping a larger
    # one), but the BL packings of F and Q coincide square for square.
    inst = random_squares(10, seed, width=12)
    part = fqw_partition(inst)
    fq = [r for r in order_rects(inst, "fqw") if r not in part.w_set]
    sub = Instance(inst.strip_width, tuple(inst.by_id[i] for i in fq))
    a = bl_pack_order(sub, fq).packing.boxes
    b = bl_pack_order(sub, order_rects(sub, "decreasing_width")).packing.boxes
    assert sorted((x.x, x.y, x.w) for x in a) == sorted((x.x, x.y, x.w) for x in b)


@pytest.mark.parametrize("seed", range(20))
def test_partition_invariant_under_permutation(seed):
    rng = random.Random(seed)
    widths = rng.sample(range(1, 30), 8)
    heights = rng.sample(range(1, 30), 8)
    inst = Instance.from_sizes(30, list(zip(widths, heights)))
    perm = [r.id for r in inst.rects]
    rng.shuffle(perm)
    a, b = fqw_partition(inst), fqw_partition(inst.reordered(perm))
    assert (set(a.f_set), set(a.q_set), set(a.w_set)) == (set(b.f_set), set(b.q_set), set(b.w_set))
