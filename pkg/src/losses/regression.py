"""
Bounding-box regression losses

    smooth_l1        sum of Huber terms over a delta vector
    iou_loss         1 - IoU
    giou_loss        1 - IoU + |C minus union| / |C|
    diou_loss        1 - IoU + squared center distance / squared diagonal of C
    center_iou_loss  smooth_ln(|C minus intersection| / |C|) + smooth_l1(center offsets)

C is the smallest box enclosing prediction and ground truth. The
Center-IoU loss subtracts the INTERSECTION from C, not the union, so a
prediction nested inside the ground truth is still pulled to its center.
"""

import math

import numpy as np

from src.assignment.encoding import encode_regression_target
from src.errors import DomainError, InvalidBoxError
from src.geometry import Box, area, center, enclosing_box, intersection_area, iou
from src.schemas import LossConfig

# ============================================================================
# Scalar building blocks
# ============================================================================


def smooth_l1(pred, target) -> float:
    """Sum over coordinates of 0.5 x^2 (|x| < 1) or |x| - 0.5."""
    pred = np.atleast_1d(np.asarray(pred, dtype=np.float64))
    target = np.atleast_1d(np.asarray(target, dtype=np.float64))
    if pred.shape != target.shape:
        raise DomainError(f"smooth_l1 length mismatch: {pred.shape} vs {target.shape}")
    diff = np.abs(pred - target)
    return float(np.sum(np.where(diff < 1.0, 0.5 * diff * diff, diff - 0.5)))


def smooth_l1_grad(x: float) -> float:
    return x if abs(x) < 1.0 else math.copysign(1.0, x)


def _check_smooth_ln_domain(x: float, sigma: float):
    if not 0.0 <= sigma < 1.0:
        raise DomainError(f"sigma must lie in [0, 1), got {sigma}")
    if not 0.0 <= x <= 1.0:
        raise DomainError(f"smooth_ln needs x in [0, 1], got {x}")


def smooth_ln(x: float, sigma: float) -> float:
    """-ln(1 - x) up to sigma, then its tangent line; C1 at x = sigma."""
    _check_smooth_ln_domain(x, sigma)
    if x <= sigma:
        return -math.log1p(-x)
    return (x - sigma) / (1.0 - sigma) - math.log1p(-sigma)


def smooth_ln_grad(x: float, sigma: float) -> float:
    _check_smooth_ln_domain(x, sigma)
    if x < sigma:
        return 1.0 / (1.0 - x)
    return 1.0 / (1.0 - sigma)


# ============================================================================
# IoU-family losses
# ============================================================================


def iou_loss(pred: Box, gt: Box) -> float:
    return 1.0 - iou(pred, gt)


def giou_loss(pred: Box, gt: Box) -> float:
    """In [0, 2); falls back to 1 - IoU when the enclosing box has zero area."""
    c_area = area(enclosing_box(pred, gt))
    if c_area <= 0:
        return iou_loss(pred, gt)
    inter = intersection_area(pred, gt)
    union = area(pred) + area(gt) - inter
    return 1.0 - iou(pred, gt) + (c_area - union) / c_area


def diou_loss(pred: Box, gt: Box) -> float:
    """
    Raises:
        DomainError: the enclosing box has a zero diagonal
    """
    c = enclosing_box(pred, gt)
    diag_sq = c.width**2 + c.height**2
    if diag_sq <= 0:
        raise DomainError(f"diou_loss undefined for a degenerate enclosing box {c}")
    (px, py), (gx, gy) = center(pred), center(gt)
    rho_sq = (px - gx) ** 2 + (py - gy) ** 2
    return 1.0 - iou(pred, gt) + rho_sq / diag_sq


# ============================================================================
# Center-IoU
# ============================================================================


def _check_reference(ref: Box):
    if ref.width <= 0 or ref.height <= 0:
        raise InvalidBoxError(f"Center reference box must have positive area: {ref}")


def enclosing_minus_intersection_ratio(pred: Box, gt: Box) -> float:
    """|C minus (gt intersect pred)| / |C|; 1 when C has zero area."""
    c_area = area(enclosing_box(pred, gt))
    if c_area <= 0:
        return 1.0
    return min(max(1.0 - intersection_area(pred, gt) / c_area, 0.0), 1.0)


def center_offsets(pred: Box, gt: Box, ref: Box) -> tuple[np.ndarray, np.ndarray]:
    """Parameterized centers t (pred) and t* (gt), normalised by the reference box."""
    rcx, rcy = center(ref)
    (px, py), (gx, gy) = center(pred), center(gt)
    t = np.array([(px - rcx) / ref.width, (py - rcy) / ref.height])
    t_star = np.array([(gx - rcx) / ref.width, (gy - rcy) / ref.height])
    return t, t_star


def center_iou_loss(
    pred: Box, gt: Box, ref: Box | None = None, cfg: LossConfig | None = None
) -> float:
    """
    Center-IoU loss of one prediction.

    Args:
        pred: predicted box
        gt: ground-truth box
        ref: box normalising the center offsets (defaults to gt; pass the
            anchor for anchor-relative offsets)
        cfg: loss parameters (sigma)

    Raises:
        InvalidBoxError: ref has zero width or height
    """
    cfg = cfg or LossConfig()
    ref = gt if ref is None else ref
    _check_reference(ref)

    ratio = enclosing_minus_intersection_ratio(pred, gt)
    t, t_star = center_offsets(pred, gt, ref)
    return smooth_ln(ratio, cfg.sigma) + smooth_l1(t, t_star)


# ============================================================================
# Dispatcher
# ============================================================================

REGRESSION_LOSS_KINDS = ("smoothl1", "iou", "giou", "diou", "centeriou")


def regression_loss(
    kind: str, pred: Box, gt: Box, ref: Box | None = None, cfg: LossConfig | None = None
) -> float:
    """
    Evaluate one of the regression losses by name.

    smoothl1 compares the deltas of pred and gt encoded against ref
    (default gt), the way a detector regresses anchor offsets.
    """
    ref = gt if ref is None else ref
    if kind == "smoothl1":
        return smooth_l1(encode_regression_target(ref, pred), encode_regression_target(ref, gt))
    if kind == "iou":
        return iou_loss(pred, gt)
    if kind == "giou":
        return giou_loss(pred, gt)
    if kind == "diou":
        return diou_loss(pred, gt)
    if kind == "centeriou":
        return center_iou_loss(pred, gt, ref, cfg)
    raise DomainError(f"Unknown regression loss '{kind}'. Available: {', '.join(REGRESSION_LOSS_KINDS)}")
