"""
Box Algebra - axis-aligned rectangles in continuous pixel coordinates

Corner convention: (x1, y1) is the top-left corner and (x2, y2) the
bottom-right one. Areas are (x2 - x1) * (y2 - y1) with no +1 pixel term.
Zero-area boxes are legal; any IoU involving them is 0.

Scalar functions take Box values; the pairwise_* functions take N x 4
numpy arrays and are what the matchers and NMS use on large inputs.
"""

import math
from dataclasses import dataclass

import numpy as np

from src.errors import InvalidBoxError


@dataclass(frozen=True, slots=True)
class Box:
    """Immutable axis-aligned box."""

    x1: float
    y1: float
    x2: float
    y2: float

    def __post_init__(self):
        coords = (self.x1, self.y1, self.x2, self.y2)
        if not all(math.isfinite(c) for c in coords):
            raise InvalidBoxError(f"Box coordinates must be finite, got {coords}")
        if self.x1 > self.x2 or self.y1 > self.y2:
            raise InvalidBoxError(f"Box requires x1 <= x2 and y1 <= y2, got {coords}")

    @property
    def width(self) -> float:
        return self.x2 - self.x1

    @property
    def height(self) -> float:
        return self.y2 - self.y1

    def to_array(self) -> np.ndarray:
        return np.array([self.x1, self.y1, self.x2, self.y2], dtype=np.float64)

    def to_list(self) -> list[float]:
        return [self.x1, self.y1, self.x2, self.y2]

    @classmethod
    def from_array(cls, values) -> "Box":
        x1, y1, x2, y2 = (float(v) for v in values)
        return cls(x1, y1, x2, y2)

    @classmethod
    def from_center(cls, cx: float, cy: float, width: float, height: float) -> "Box":
        return cls(cx - width / 2, cy - height / 2, cx + width / 2, cy + height / 2)

    def translate(self, dx: float, dy: float) -> "Box":
        return Box(self.x1 + dx, self.y1 + dy, self.x2 + dx, self.y2 + dy)

    def scale(self, s: float) -> "Box":
        """Scale about the origin (s > 0 keeps the corner order)."""
        return Box(self.x1 * s, self.y1 * s, self.x2 * s, self.y2 * s)


# ============================================================================
# Scalar operations
# ============================================================================


def area(b: Box) -> float:
    return (b.x2 - b.x1) * (b.y2 - b.y1)


def intersection_area(a: Box, b: Box) -> float:
    w = min(a.x2, b.x2) - max(a.x1, b.x1)
    h = min(a.y2, b.y2) - max(a.y1, b.y1)
    if w <= 0 or h <= 0:
        return 0.0
    return w * h


def iou(a: Box, b: Box) -> float:
    """Intersection over union; 0 when the union has zero area."""
    inter = intersection_area(a, b)
    union = area(a) + area(b) - inter
    if union <= 0:
        return 0.0
    return inter / union


def enclosing_box(a: Box, b: Box) -> Box:
    """Smallest axis-aligned box containing both inputs."""
    return Box(min(a.x1, b.x1), min(a.y1, b.y1), max(a.x2, b.x2), max(a.y2, b.y2))


def center(b: Box) -> tuple[float, float]:
    return ((b.x1 + b.x2) / 2, (b.y1 + b.y2) / 2)


def contains(outer: Box, inner: Box) -> bool:
    return (
        outer.x1 <= inner.x1 and outer.y1 <= inner.y1 and outer.x2 >= inner.x2 and outer.y2 >= inner.y2
    )


def clamp_to(b: Box, bounds: Box) -> Box:
    """Intersect b with bounds; a disjoint b collapses to a zero-area box on the bounds edge."""
    x1 = min(max(b.x1, bounds.x1), bounds.x2)
    y1 = min(max(b.y1, bounds.y1), bounds.y2)
    x2 = max(min(b.x2, bounds.x2), x1)
    y2 = max(min(b.y2, bounds.y2), y1)
    return Box(x1, y1, x2, y2)


# ============================================================================
# Vectorised operations (N x 4 arrays)
# ============================================================================


def boxes_to_array(boxes) -> np.ndarray:
    if len(boxes) == 0:
        return np.zeros((0, 4), dtype=np.float64)
    return np.array([[b.x1, b.y1, b.x2, b.y2] for b in boxes], dtype=np.float64)


def box_areas(boxes: np.ndarray) -> np.ndarray:
    boxes = np.asarray(boxes, dtype=np.float64).reshape(-1, 4)
    return (boxes[:, 2] - boxes[:, 0]) * (boxes[:, 3] - boxes[:, 1])


def pairwise_intersection(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    a = np.asarray(a, dtype=np.float64).reshape(-1, 4)
    b = np.asarray(b, dtype=np.float64).reshape(-1, 4)
    w = np.minimum(a[:, None, 2], b[None, :, 2]) - np.maximum(a[:, None, 0], b[None, :, 0])
    h = np.minimum(a[:, None, 3], b[None, :, 3]) - np.maximum(a[:, None, 1], b[None, :, 1])
    return np.clip(w, 0.0, None) * np.clip(h, 0.0, None)


def pairwise_iou(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """N x M IoU matrix, 0 wherever the union is empty."""
    inter = pairwise_intersection(a, b)
    union = box_areas(a)[:, None] + box_areas(b)[None, :] - inter
    out = np.zeros_like(inter)
    np.divide(inter, union, out=out, where=union > 0)
    return out


def pairwise_intersection_over_first(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """intersection(a_i, b_j) / area(a_i); 0 for zero-area a_i."""
    inter = pairwise_intersection(a, b)
    areas = box_areas(a)[:, None]
    out = np.zeros_like(inter)
    np.divide(inter, np.broadcast_to(areas, inter.shape), out=out, where=areas > 0)
    return out
