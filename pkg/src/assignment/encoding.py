"""
Regression target encoding

Deltas are (dcx / w_a, dcy / h_a, ln(w_g / w_a), ln(h_g / h_a)) relative
to the anchor; decode is the exact inverse.
"""

import numpy as np

from src.errors import DomainError, InvalidBoxError
from src.geometry import Box, area, center


def encode_regression_target(anchor: Box, gt_full: Box) -> tuple[float, float, float, float]:
    """
    Raises:
        InvalidBoxError: anchor or ground truth has zero width or height
    """
    if area(anchor) <= 0:
        raise InvalidBoxError(f"Cannot encode against a zero-area anchor: {anchor}")
    if area(gt_full) <= 0:
        raise InvalidBoxError(f"Cannot encode a zero-area target: {gt_full}")

    acx, acy = center(anchor)
    gcx, gcy = center(gt_full)
    return (
        (gcx - acx) / anchor.width,
        (gcy - acy) / anchor.height,
        float(np.log(gt_full.width / anchor.width)),
        float(np.log(gt_full.height / anchor.height)),
    )


def decode_regression_target(anchor: Box, deltas) -> Box:
    dx, dy, dw, dh = (float(d) for d in deltas)
    acx, acy = center(anchor)
    return Box.from_center(
        acx + dx * anchor.width,
        acy + dy * anchor.height,
        anchor.width * float(np.exp(dw)),
        anchor.height * float(np.exp(dh)),
    )


def encode_array(anchors: np.ndarray, gts: np.ndarray) -> np.ndarray:
    """Row-wise encode of matched (anchor, gt) pairs, both A x 4."""
    aw = anchors[:, 2] - anchors[:, 0]
    ah = anchors[:, 3] - anchors[:, 1]
    gw = gts[:, 2] - gts[:, 0]
    gh = gts[:, 3] - gts[:, 1]
    if np.any(aw <= 0) or np.any(ah <= 0):
        raise InvalidBoxError("Cannot encode against zero-area anchors")
    if np.any(gw <= 0) or np.any(gh <= 0):
        raise InvalidBoxError("Cannot encode zero-area targets")
    dcx = (gts[:, 0] + gts[:, 2] - anchors[:, 0] - anchors[:, 2]) / 2
    dcy = (gts[:, 1] + gts[:, 3] - anchors[:, 1] - anchors[:, 3]) / 2
    return np.stack([dcx / aw, dcy / ah, np.log(gw / aw), np.log(gh / ah)], axis=1)


def refine_boxes(anchors: np.ndarray, deltas: np.ndarray) -> np.ndarray:
    """Apply per-anchor deltas (A x 4) to anchor boxes (A x 4)."""
    anchors = np.asarray(anchors, dtype=np.float64).reshape(-1, 4)
    deltas = np.asarray(deltas, dtype=np.float64).reshape(-1, 4)
    if anchors.shape != deltas.shape:
        raise DomainError(f"anchors {anchors.shape} and deltas {deltas.shape} differ in shape")
    aw = anchors[:, 2] - anchors[:, 0]
    ah = anchors[:, 3] - anchors[:, 1]
    cx = (anchors[:, 0] + anchors[:, 2]) / 2 + deltas[:, 0] * aw
    cy = (anchors[:, 1] + anchors[:, 3]) / 2 + deltas[:, 1] * ah
    w = aw * np.exp(deltas[:, 2])
    h = ah * np.exp(deltas[:, 3])
    return np.stack([cx - w / 2, cy - h / 2, cx + w / 2, cy + h / 2], axis=1)
