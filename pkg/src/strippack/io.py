"""JSON encoding of instances, packings and traces.

Numbers are written as plain integers when integral and as ``"p/q"``
strings otherwise, so a round trip never loses precision.
"""

from __future__ import annotations

import json
from decimal import Decimal
from pathlib import Path
from typing import Any, Union

from .core import (
    Instance,
    InstanceError,
    Packing,
    Placement,
    Rect,
    format_scalar,
    to_scalar,
)

PathLike = Union[str, Path]


def loads(text: str) -> Any:
    # Decimal keeps "0.1" exact; the default float parser would not.
    try:
        return json.loads(text, parse_float=Decimal)
    except json.JSONDecodeError as exc:
        raise InstanceError(f"invalid JSON: {exc}") from None


def dumps(obj: Any) -> str:
    return json.dumps(obj, indent=2, sort_keys=False) + "\n"


def instance_from_dict(data: dict) -> Instance:
    if not isinstance(data, dict) or "width" not in data or "rects" not in data:
        raise InstanceError('instance JSON needs "width" and "rects"')
    rects = []
    for i, item in enumerate(data["rects"]):
        try:
            rid = str(item["id"]) if "id" in item else f"r{i + 1}"
            rects.append(Rect(rid, to_scalar(item["w"]), to_scalar(item["h"])))
        except (KeyError, TypeError):
            raise InstanceError(f"rect #{i} needs numeric w and h") from None
    return Instance(to_scalar(data["width"]), tuple(rects))


def instance_to_dict(instance: Instance) -> dict:
    return {
        "width": format_scalar(instance.strip_width),
        "rects": [{"id": r.id, "w": format_scalar(r.w), "h": format_scalar(r.h)}
                  for r in instance.rects],
    }


def load_instance(path: PathLike) -> Instance:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InstanceError(f"cannot read {path}: {exc}") from None
    return instance_from_dict(loads(text))


def save_instance(instance: Instance, path: PathLike) -> None:
    Path(path).write_text(dumps(instance_to_dict(instance)))


def packing_to_dict(packing: Packing, instance_ref: Union[str, None] = None) -> dict:
    return {
        "instance": instance_ref if instance_ref is not None else instance_to_dict(packing.instance),
        "placements": [{"id": p.rect_id, "x": format_scalar(p.x), "y": format_scalar(p.y)}
                       for p in packing.placements],
        "height": format_scalar(packing.height),
    }


def packing_from_dict(data: dict, base_dir: Union[Path, None] = None) -> Packing:
    if not isinstance(data, dict) or "instance" not in data or "placements" not in data:
        raise InstanceError('packing JSON needs "instance" and "placements"')
    ref = data["instance"]
    if isinstance(ref, str):
        path = Path(ref)
        if base_dir is not None and not path.is_absolute():
            path = base_dir / path
        instance = load_instance(path)
    else:
        instance = instance_from_dict(ref)
    try:
        placements = tuple(Placement(str(p["id"]), to_scalar(p["x"]), to_scalar(p["y"]))
                           for p in data["placements"])
    except (KeyError, TypeError):
        raise InstanceError("each placement needs id, x and y") from None
    packing = Packing(instance, placements)
    if "height" in data and to_scalar(data["height"]) != packing.height:
        raise InstanceError(
            f"stated height {data['height']} differs from computed height {packing.height}"
        )
    return packing


def load_packing(path: PathLike) -> Packing:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise InstanceError(f"cannot read {path}: {exc}") from None
    return packing_from_dict(loads(text), base_dir=path.parent)


def save_packing(packing: Packing, path: PathLike, instance_ref: Union[str, None] = None) -> None:
    Path(path).write_text(dumps(packing_to_dict(packing, instance_ref)))
