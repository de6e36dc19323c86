from fractions import Fraction

import pytest

from strippack.core import InstanceError, verify_feasible
from strippack.engine import bl_height
from strippack.generators import (
    FamilySpec,
    checkerboard_ext,
    checkerboard_layout,
    checkerboard_reference_packing,
    content_hash,
    figure5,
    gen,
    gen_corpus,
    random_corpus_specs,
    random_rects,
    random_squares,
)
from strippack.io import load_instance, loads


@pytest.mark.parametrize("w,h", [(3, 4), (4, 2), (10, 10), (50, 7), (7, 13)])
def test_figure5_height_is_three_h(w, h):
    assert bl_height(figure5(w, h)) == 3 * h


@pytest.mark.parametrize("w,h", [(2, 4), (3, 1)])
def test_figure5_rejects_small_parameters(w, h):
    with pytest.raises(InstanceError):
        figure5(w, h)


def test_random_generators_are_seeded():
    assert random_rects(8, 5) == random_rects(8, 5)
    assert random_rects(8, 5) != random_rects(8, 6)
    sq = random_squares(10, 3, width=6)
    assert all(r.w == r.h <= 6 for r in sq.rects)


def test_random_rect_widths_fit():
    inst = random_rects(50, 1, width=4, w_range=(1, 8))
    assert max(r.w for r in inst.rects) <= 4


def test_unknown_family_and_missing_param():
    with pytest.raises(InstanceError):
        FamilySpec("nope")
    with pytest.raises(InstanceError):
        gen(FamilySpec("checkerboard_ext"))


def test_corpus_specs_are_reproducible():
    a = [gen(s) for s in random_corpus_specs(20, seed=9)]
    b = [gen(s) for s in random_corpus_specs(20, seed=9)]
    assert [content_hash(x) for x in a] == [content_hash(x) for x in b]
    assert all(1 <= len(x.rects) <= 15 for x in a)


def test_gen_corpus_writes_manifest(tmp_path):
    specs = random_corpus_specs(5, seed=3) + [FamilySpec("figure5", {"w": 4, "h": 3})]
    manifest = gen_corpus(specs, tmp_path)
    on_disk = loads((tmp_path / "manifest.json").read_text())
    assert on_disk == manifest
    for entry, spec in zip(manifest["instances"], specs):
        inst = load_instance(tmp_path / entry["file"])
        assert content_hash(inst) == entry["sha256"] == content_hash(gen(spec))


@pytest.mark.parametrize("k", [1, 2, 3])
def test_checkerboard_reference_is_feasible(k):
    ref = checkerboard_reference_packing(k)
    assert verify_feasible(ref).ok
    lay = checkerboard_layout(k)
    assert ref.height == lay.base_heights[0] + lay.wide_count * lay.side


def test_checkerboard_sizes():
    lay = checkerboard_layout(3)
    inst = checkerboard_ext(3)
    assert len(inst.rects) == lay.columns + lay.squares + lay.wide_count
    assert all(2 * r.w > inst.strip_width for r in inst.rects[-lay.wide_count:])
    assert Fraction(lay.wide_width) <= inst.strip_width


def test_checkerboard_ratio_is_above_one():
    assert bl_height(checkerboard_ext(2)) > checkerboard_reference_packing(2).height
