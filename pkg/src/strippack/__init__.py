"""Bottom-Left strip packing with exact arithmetic, the FQW ordering and its analysis."""

from .core import (Box, FeasibilityReport, Instance, InstanceError, Packing,
                   PackingStructureError, Placement, Rect, StripPackError, verify_feasible)
from .engine import PlacementTrace, TraceStep, bl_height, bl_pack, bl_pack_order, fqw_trace
from .ordering import FqwPartition, OrderingKind, fqw_partition, order_rects

__version__ = "0.1.0"

__all__ = [
    "Box", "FeasibilityReport", "FqwPartition", "Instance", "InstanceError", "OrderingKind",
    "Packing", "PackingStructureError", "Placement", "PlacementTrace", "Rect",
    "StripPackError", "TraceStep", "bl_height", "bl_pack", "bl_pack_order", "fqw_partition",
    "fqw_trace", "order_rects", "verify_feasible",
]
