"""
Anchor Generator - pyramid of default boxes

For every level, a grid of ceil(W / stride) x ceil(H / stride) cells, and
per cell one anchor per configured width. An anchor of width w has height
w / aspect_ratio and is centered on its cell center
((col + 0.5) * stride, (row + 0.5) * stride). Anchors are not clipped to
the image.

Output order is (level, row, col, width_index) and is deterministic.
"""

from dataclasses import dataclass

import numpy as np

from src.errors import InvalidConfigError
from src.geometry import Box
from src.schemas import AnchorLevelConfig
from src.utils.structured_logging import get_logger

logger = get_logger("anchors")


@dataclass(frozen=True, slots=True)
class Anchor:
    """A default box and where it sits in the pyramid."""

    box: Box
    level_index: int
    grid_row: int
    grid_col: int
    width_index: int
    stride: int


def feature_map_size(image_dim: int, stride: int) -> int:
    """Number of grid cells covering image_dim pixels (ceiling division)."""
    if image_dim <= 0 or stride <= 0:
        raise InvalidConfigError(
            f"image_dim and stride must be positive, got image_dim={image_dim}, stride={stride}"
        )
    return -(-image_dim // stride)


def _level_array(image_w: int, image_h: int, level: AnchorLevelConfig) -> np.ndarray:
    cols = feature_map_size(image_w, level.stride)
    rows = feature_map_size(image_h, level.stride)
    widths = np.asarray(level.widths, dtype=np.float64)
    heights = widths / level.aspect_ratio

    cy, cx, k = np.meshgrid(
        (np.arange(rows) + 0.5) * level.stride,
        (np.arange(cols) + 0.5) * level.stride,
        np.arange(len(widths)),
        indexing="ij",
    )
    cx, cy, k = cx.ravel(), cy.ravel(), k.ravel()
    half_w = widths[k] / 2
    half_h = heights[k] / 2
    return np.stack([cx - half_w, cy - half_h, cx + half_w, cy + half_h], axis=1)


def generate_anchor_array(
    image_w: int, image_h: int, configs: list[AnchorLevelConfig]
) -> np.ndarray:
    """Anchor boxes as an A x 4 array, in generate_anchors order."""
    if not configs:
        raise InvalidConfigError("At least one anchor level is required")
    return np.concatenate([_level_array(image_w, image_h, level) for level in configs], axis=0)


def generate_anchors(
    image_w: int, image_h: int, configs: list[AnchorLevelConfig]
) -> list[Anchor]:
    """
    Build every anchor of the pyramid.

    Raises:
        InvalidConfigError: empty config list or non-positive image size
    """
    if not configs:
        raise InvalidConfigError("At least one anchor level is required")

    anchors: list[Anchor] = []
    for level_index, level in enumerate(configs):
        cols = feature_map_size(image_w, level.stride)
        rows = feature_map_size(image_h, level.stride)
        n_widths = len(level.widths)
        coords = _level_array(image_w, image_h, level)
        for i, (x1, y1, x2, y2) in enumerate(coords.tolist()):
            cell, width_index = divmod(i, n_widths)
            row, col = divmod(cell, cols)
            anchors.append(
                Anchor(
                    box=Box(x1, y1, x2, y2),
                    level_index=level_index,
                    grid_row=row,
                    grid_col=col,
                    width_index=width_index,
                    stride=level.stride,
                )
            )
        logger.debug(
            "level_generated",
            level=level_index,
            stride=level.stride,
            rows=rows,
            cols=cols,
            count=rows * cols * n_widths,
        )

    logger.info("anchors_generated", image_w=image_w, image_h=image_h, count=len(anchors))
    return anchors


def anchors_to_array(anchors: list[Anchor]) -> np.ndarray:
    if not anchors:
        return np.zeros((0, 4), dtype=np.float64)
    return np.array([[a.box.x1, a.box.y1, a.box.x2, a.box.y2] for a in anchors])


def expected_anchor_count(image_w: int, image_h: int, configs: list[AnchorLevelConfig]) -> int:
    return sum(
        feature_map_size(image_w, c.stride) * feature_map_size(image_h, c.stride) * len(c.widths)
        for c in configs
    )
