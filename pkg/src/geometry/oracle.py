"""
Rasterized Area Oracle

Estimates the area of a region built from boxes by counting the centers
of a regular grid of cells of side `resolution` that fall inside it.
Used by the tests to check every closed-form area formula.

Regions compose with set operators:

    a, b = BoxRegion(box_a), BoxRegion(box_b)
    rasterized_area_oracle(a | b, 0.01)                 # union
    rasterized_area_oracle(BoxRegion(c) - (a & b), 0.01)  # C minus the intersection
"""

from abc import ABC, abstractmethod

import numpy as np

from src.errors import DomainError
from src.geometry.boxes import Box


class Region(ABC):
    """A planar region that can test grid points for membership."""

    @abstractmethod
    def contains(self, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
        """Boolean mask of points (xs[i], ys[i]) inside the region."""

    @abstractmethod
    def boxes(self) -> list[Box]:
        """Boxes the expression is built from."""

    def __or__(self, other: "Region") -> "Region":
        return _Combined(self, other, np.logical_or)

    def __and__(self, other: "Region") -> "Region":
        return _Combined(self, other, np.logical_and)

    def __sub__(self, other: "Region") -> "Region":
        return _Combined(self, other, lambda p, q: np.logical_and(p, np.logical_not(q)))


class BoxRegion(Region):
    def __init__(self, box: Box):
        self.box = box

    def contains(self, xs, ys):
        b = self.box
        return (xs >= b.x1) & (xs < b.x2) & (ys >= b.y1) & (ys < b.y2)

    def boxes(self):
        return [self.box]


class _Combined(Region):
    def __init__(self, left: Region, right: Region, op):
        self.left = left
        self.right = right
        self.op = op

    def contains(self, xs, ys):
        return self.op(self.left.contains(xs, ys), self.right.contains(xs, ys))

    def boxes(self):
        return self.left.boxes() + self.right.boxes()


def rasterized_area_oracle(expr: Region | Box, resolution: float) -> float:
    """
    Grid estimate of a region's area.

    The grid is anchored at the lower corner of the bounding extent of all
    boxes in the expression; the error is O(resolution * perimeter).

    Raises:
        DomainError: resolution is not positive
    """
    if not resolution > 0:
        raise DomainError(f"resolution must be positive, got {resolution}")
    region = BoxRegion(expr) if isinstance(expr, Box) else expr

    boxes = region.boxes()
    x_lo = min(b.x1 for b in boxes)
    y_lo = min(b.y1 for b in boxes)
    x_hi = max(b.x2 for b in boxes)
    y_hi = max(b.y2 for b in boxes)
    nx = int(np.ceil((x_hi - x_lo) / resolution))
    ny = int(np.ceil((y_hi - y_lo) / resolution))
    if nx == 0 or ny == 0:
        return 0.0

    xs = x_lo + (np.arange(nx) + 0.5) * resolution
    ys = y_lo + (np.arange(ny) + 0.5) * resolution
    grid_x, grid_y = np.meshgrid(xs, ys, indexing="xy")
    inside = region.contains(grid_x, grid_y)
    return float(np.count_nonzero(inside)) * resolution * resolution
