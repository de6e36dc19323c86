"""Instance families: the two drawn fixtures, adversarial families, random ones."""

from __future__ import annotations

import hashlib
import json
import random
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Optional, Sequence

from .core import Instance, InstanceError, Packing, Placement, Rect
from .io import dumps, instance_to_dict

# (w, h) of r1..r15 as drawn; FQW-BL reproduces the drawn positions exactly.
FIGURE1_SIZES = (
    (3, 11), (2, 10), (1, 9), (5, 8), (3, 6), (1, 5),
    (8, 4), (7, 3), (7, 4), (5, 4), (3, 6), (3, 4), (2, 4),
    (11, 2), (14, 1),
)
FIGURE1_WIDTH = 16
FIGURE1_POSITIONS = (
    (0, 0), (3, 0), (5, 0), (6, 0), (11, 0), (14, 0),
    (6, 8), (0, 12), (7, 12), (0, 15), (5, 16), (8, 16), (14, 5),
    (0, 22), (0, 24),
)

FAMILIES = ("figure1", "figure5", "checkerboard_ext", "random_rects", "random_squares")


def figure1() -> Instance:
    return Instance.from_sizes(FIGURE1_WIDTH, FIGURE1_SIZES)


def figure1_packing() -> Packing:
    """The packing exactly as drawn, independent of the engine."""
    inst = figure1()
    return Packing(inst, tuple(Placement(f"r{i}", x, y)
                               for i, (x, y) in enumerate(FIGURE1_POSITIONS, 1)))


def figure5(w: int = 3, h: int = 4) -> Instance:
    """Strip ``3w`` with ``(w, h+1), (w+1, h), (w+1, h), (w+1, 1), (w+1, h)``.

    FQW puts the first two in F and the other three in Q; BL then stacks the
    Q rectangles so that the packing is ``3h`` tall.
    """
    if w < 3 or h < 2:
        raise InstanceError("figure5 needs w >= 3 and h >= 2")
    return Instance.from_sizes(3 * w, [(w, h + 1), (w + 1, h), (w + 1, h), (w + 1, 1), (w + 1, h)])


@dataclass(frozen=True)
class CheckerboardLayout:
    """Integer dimensions of ``checkerboard_ext(k)``.

    ``columns`` base rectangles of width ``2*side - 1`` form a staircase that
    drops by 1 per column. Squares of one ``side`` then settle into a sheared
    checkerboard: each square touches the one down-left of it and rests on a
    1-wide ledge of the one down-right, so every row is about half empty and
    the gaps (``side - 1`` wide) never take a square. Row ``j`` holds
    ``columns + j`` squares because the checkerboard cannot start cleanly at
    the left wall and a dense wedge grows there. ``wide_count`` slabs just
    wider than half the strip come last and stack one per level.

    The reference packing stands the slabs in a column and packs the squares
    beside them ``columns`` per row, so it needs only ``wide_count`` levels
    above the base row while BL needs ``rows + wide_count``.
    """

    k: int
    columns: int
    side: int
    strip_width: int
    base_heights: tuple[int, ...]
    squares: int
    wide_width: int
    wide_count: int

    @property
    def base_width(self) -> int:
        return 2 * self.side - 1

    @property
    def rows(self) -> int:
        return self.k


def checkerboard_layout(k: int) -> CheckerboardLayout:
    if k < 1:
        raise InstanceError("checkerboard_ext needs k >= 1")
    # m >= k(k-1)/2 keeps the reference at k+1 slab levels, so the ratio rises with k.
    m = max(10 * k, k * (k - 1) // 2)
    side = 1000 * m  # the staircase (m units) stays small next to one row
    width = m * (2 * side - 1) + m + 2  # room for m squares beside one slab
    squares = m * k + k * (k - 1) // 2
    wide = width // 2 + 1
    count = -(-squares // m)
    return CheckerboardLayout(k, m, side, width, tuple(side + m - i for i in range(m)),
                              squares, wide, count)


def checkerboard_ext(k: int) -> Instance:
    """Half-empty checkerboard family whose FQW ratio rises towards 2 with ``k``.

    See :class:`CheckerboardLayout` for the geometry and
    :func:`checkerboard_reference_packing` for the ratio denominator.
    """
    lay = checkerboard_layout(k)
    sizes = [(lay.base_width, h) for h in lay.base_heights]
    sizes += [(lay.side, lay.side)] * lay.squares
    sizes += [(lay.wide_width, lay.side)] * lay.wide_count
    return Instance.from_sizes(lay.strip_width, sizes)


def checkerboard_reference_packing(k: int) -> Packing:
    """Base row, then slabs stacked at the left and squares in rows beside them."""
    lay = checkerboard_layout(k)
    inst = checkerboard_ext(k)
    ids = [r.id for r in inst.rects]
    m = lay.columns
    base_top = lay.base_heights[0]
    placements = [Placement(ids[i], i * lay.base_width, 0) for i in range(m)]
    for j in range(lay.squares):
        row, col = divmod(j, m)
        placements.append(Placement(ids[m + j], lay.wide_width + col * lay.side,
                                    base_top + row * lay.side))
    first_wide = m + lay.squares
    for j in range(lay.wide_count):
        placements.append(Placement(ids[first_wide + j], 0, base_top + j * lay.side))
    return Packing(inst, tuple(placements))


def random_rects(n: int, seed: int, width: int = 10, w_range=(1, 8), h_range=(1, 8),
                 prefix: str = "r") -> Instance:
    """``n`` integer rectangles; widths are clipped to the strip."""
    if n < 0:
        raise InstanceError("n must be non-negative")
    rng = random.Random(seed)
    lo_w, hi_w = w_range
    hi_w = min(hi_w, width)
    if lo_w < 1 or lo_w > hi_w or h_range[0] < 1 or h_range[0] > h_range[1]:
        raise InstanceError("invalid size ranges")
    sizes = [(rng.randint(lo_w, hi_w), rng.randint(*h_range)) for _ in range(n)]
    return Instance.from_sizes(width, sizes, prefix)


def random_squares(n: int, seed: int, width: int = 10, s_range=(1, 8),
                   prefix: str = "s") -> Instance:
    if n < 0:
        raise InstanceError("n must be non-negative")
    rng = random.Random(seed)
    lo, hi = s_range[0], min(s_range[1], width)
    if lo < 1 or lo > hi:
        raise InstanceError("invalid size range")
    sides = [rng.randint(lo, hi) for _ in range(n)]
    return Instance.from_sizes(width, [(s, s) for s in sides], prefix)


@dataclass(frozen=True)
class FamilySpec:
    family: str
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise InstanceError(f"unknown family {self.family!r}; choose from {FAMILIES}")

    def to_dict(self) -> dict:
        return {"family": self.family, "params": dict(self.params)}


def gen(spec: FamilySpec) -> Instance:
    p = dict(spec.params)
    try:
        if spec.family == "figure1":
            return figure1()
        if spec.family == "figure5":
            return figure5(int(p.get("w", 3)), int(p.get("h", 4)))
        if spec.family == "checkerboard_ext":
            return checkerboard_ext(int(p["k"]))
        if spec.family == "random_rects":
            return random_rects(int(p["n"]), int(p["seed"]), int(p.get("width", 10)),
                                tuple(p.get("w_range", (1, 8))), tuple(p.get("h_range", (1, 8))))
        return random_squares(int(p["n"]), int(p["seed"]), int(p.get("width", 10)),
                              tuple(p.get("s_range", (1, 8))))
    except KeyError as exc:
        raise InstanceError(f"{spec.family} needs parameter {exc.args[0]!r}") from None


def content_hash(instance: Instance) -> str:
    blob = json.dumps(instance_to_dict(instance), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()


def _file_stem(spec: FamilySpec, i: int) -> str:
    parts = [f"{i:04d}", spec.family]
    parts += [f"{k}{v}" for k, v in sorted(spec.params.items())
              if k in ("w", "h", "k", "n", "seed")]
    return "_".join(parts)


def gen_corpus(specs: Sequence[FamilySpec], out_dir) -> dict[str, Any]:
    """Write one instance file per FamilySpec plus ``manifest.json``."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    entries = []
    for i, spec in enumerate(specs):
        inst = gen(spec)
        name = _file_stem(spec, i) + ".json"
        (out / name).write_text(dumps(instance_to_dict(inst)))
        entries.append({"file": name, **spec.to_dict(), "sha256": content_hash(inst)})
    manifest = {"instances": entries}
    (out / "manifest.json").write_text(dumps(manifest))
    return manifest


def random_corpus_specs(count: int, seed: int, n_range=(1, 15), width_range=(4, 16),
                        dim_max: int = 8, squares: bool = False) -> list[FamilySpec]:
    """Specs for a reproducible random corpus; per-instance seeds derive from ``seed``."""
    rng = random.Random(seed)
    specs = []
    for _ in range(count):
        n = rng.randint(*n_range)
        width = rng.randint(*width_range)
        sub = rng.randrange(2**31)
        if squares:
            specs.append(FamilySpec("random_squares",
                                    {"n": n, "seed": sub, "width": width,
                                     "s_range": [1, dim_max]}))
        else:
            specs.append(FamilySpec("random_rects",
                                    {"n": n, "seed": sub, "width": width,
                                     "w_range": [1, dim_max], "h_range": [1, dim_max]}))
    return specs
