"""
Ground-truth annotations with full and visible boxes.

The visible box is clamped into the full box when a GroundTruth is built
through `from_boxes`, so the visible ratio never exceeds 1.
"""

from dataclasses import dataclass

from src.errors import InvalidBoxError
from src.geometry import Box, area, clamp_to


@dataclass(frozen=True, slots=True)
class GroundTruth:
    """A pedestrian annotation: full-body box, optional visible box, ignore flag."""

    full_box: Box
    visible_box: Box | None = None
    ignore: bool = False

    @classmethod
    def from_boxes(
        cls, full_box: Box, visible_box: Box | None = None, ignore: bool = False
    ) -> "GroundTruth":
        if visible_box is not None:
            visible_box = clamp_to(visible_box, full_box)
        return cls(full_box=full_box, visible_box=visible_box, ignore=ignore)

    @property
    def height(self) -> float:
        return self.full_box.height

    def with_ignore(self, ignore: bool) -> "GroundTruth":
        return GroundTruth(self.full_box, self.visible_box, ignore)


def visible_ratio(gt: GroundTruth) -> float:
    """
    area(visible) / area(full); 1.0 when there is no visible box.

    Raises:
        InvalidBoxError: the full box has zero area
    """
    full = area(gt.full_box)
    if full <= 0:
        raise InvalidBoxError(f"visible_ratio needs a full box with positive area: {gt.full_box}")
    if gt.visible_box is None:
        return 1.0
    return min(area(gt.visible_box) / full, 1.0)


def effective_match_box(gt: GroundTruth, t_vis: float) -> Box:
    """Visible box for occluded pedestrians (ratio < t_vis), full box otherwise."""
    if gt.visible_box is not None and visible_ratio(gt) < t_vis:
        return gt.visible_box
    return gt.full_box
