"""SVG 1.1 drawings of packings, with optional region braces on the right."""

from __future__ import annotations

from fractions import Fraction
from typing import Optional, Sequence
from xml.sax.saxutils import escape

from .core import Packing
from .ordering import FqwPartition, fqw_partition

COLORS = {"F": "#4a78c2", "Q": "#9c6a3c", "W": "#4f9a4f"}
STROKE = "#222222"
MARGIN = 10


def _num(v) -> str:
    return f"{float(v):.4f}".rstrip("0").rstrip(".")


def render_svg(packing: Packing, scale: float = 20.0,
               partition: Optional[FqwPartition] = None,
               regions: Optional[Sequence] = None, labels: bool = True) -> str:
    """Draw ``packing`` with F rectangles blue, Q brown and W green.

    The strip bottom is at the bottom of the image. ``regions`` is a list of
    :class:`~strippack.analysis.StripRegion`; non-empty ones get a brace and a label.
    """
    inst = packing.instance
    part = partition if partition is not None else fqw_partition(inst)
    width = float(inst.strip_width) * scale
    height = max(float(packing.height), 1.0) * scale
    brace_room = 60 if regions else 0
    total_w = width + 2 * MARGIN + brace_room
    total_h = height + 2 * MARGIN

    def sy(y) -> float:
        return MARGIN + height - float(y) * scale

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{_num(total_w)}" '
        f'height="{_num(total_h)}" viewBox="0 0 {_num(total_w)} {_num(total_h)}">',
        f'<rect x="{MARGIN}" y="{MARGIN}" width="{_num(width)}" height="{_num(height)}" '
        f'fill="white" stroke="{STROKE}" stroke-dasharray="4 2"/>',
    ]
    for box in packing.boxes:
        fill = COLORS[part.klass(box.id)]
        x = MARGIN + float(box.x) * scale
        y = sy(box.y + box.h)
        out.append(f'<rect x="{_num(x)}" y="{_num(y)}" width="{_num(float(box.w) * scale)}" '
                   f'height="{_num(float(box.h) * scale)}" fill="{fill}" stroke="{STROKE}">'
                   f'<title>{escape(box.id)} {box.w}x{box.h} at ({box.x}, {box.y})</title></rect>')
        if labels:
            cx = x + float(box.w) * scale / 2
            cy = y + float(box.h) * scale / 2
            out.append(f'<text x="{_num(cx)}" y="{_num(cy)}" font-size="{_num(min(12, scale * 0.6))}" '
                       f'text-anchor="middle" dominant-baseline="middle" fill="white">'
                       f'{escape(box.id)}</text>')
    if regions:
        bx = MARGIN + width + 8
        for reg in regions:
            if reg.empty:
                continue
            top, bot = sy(reg.y_hi), sy(reg.y_lo)
            mid = (top + bot) / 2
            out.append(f'<path d="M {_num(bx)} {_num(top + 1)} q 6 0 6 6 L {_num(bx + 6)} '
                       f'{_num(mid - 4)} l 4 4 l -4 4 L {_num(bx + 6)} {_num(bot - 7)} '
                       f'q 0 6 -6 6" fill="none" stroke="{STROKE}"/>')
            out.append(f'<text x="{_num(bx + 14)}" y="{_num(mid)}" font-size="11" '
                       f'dominant-baseline="middle">H{reg.index}</text>')
    out.append(f'<text x="{MARGIN}" y="{_num(total_h - 1)}" font-size="9">'
               f'W={escape(str(inst.strip_width))} h={escape(str(Fraction(packing.height)))}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
