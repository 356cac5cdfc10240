"""
Axis-aligned box geometry shared by anchors, assignment, losses, NMS and evaluation.
"""

from .boxes import (
    Box,
    area,
    box_areas,
    boxes_to_array,
    center,
    clamp_to,
    contains,
    enclosing_box,
    intersection_area,
    iou,
    pairwise_intersection,
    pairwise_intersection_over_first,
    pairwise_iou,
)
from .oracle import BoxRegion, Region, rasterized_area_oracle

__all__ = [
    "Box",
    "BoxRegion",
    "Region",
    "area",
    "box_areas",
    "boxes_to_array",
    "center",
    "clamp_to",
    "contains",
    "enclosing_box",
    "intersection_area",
    "iou",
    "pairwise_intersection",
    "pairwise_intersection_over_first",
    "pairwise_iou",
    "rasterized_area_oracle",
]
