"""
Analytic gradient of the Center-IoU loss with respect to the predicted corners.

The loss is piecewise smooth: which corner bounds the enclosing box C and
which one bounds the intersection depends on the relative order of the
predicted and ground-truth coordinates. Each case contributes its own
partial derivative. Where two coordinates tie, the right-sided derivative
(the one seen when increasing the predicted coordinate) is returned.

The reference box is a constant: gradients never flow into it, even when
it is the ground truth.
"""

import numpy as np

from src.geometry import Box
from src.schemas import LossConfig

from .regression import _check_reference, smooth_l1_grad, smooth_ln, smooth_ln_grad


def _terms(p, g):
    px1, py1, px2, py2 = p
    gx1, gy1, gx2, gy2 = g
    cw = max(px2, gx2) - min(px1, gx1)
    ch = max(py2, gy2) - min(py1, gy1)
    w_raw = min(px2, gx2) - max(px1, gx1)
    h_raw = min(py2, gy2) - max(py1, gy1)
    return cw, ch, w_raw, h_raw


def center_iou_value(p, g, r, sigma: float) -> float:
    """Center-IoU loss on raw (x1, y1, x2, y2) sequences, without box validation."""
    cw, ch, w_raw, h_raw = _terms(p, g)
    c_area = cw * ch
    inter = max(w_raw, 0.0) * max(h_raw, 0.0)
    ratio = 1.0 if c_area <= 0 else min(max(1.0 - inter / c_area, 0.0), 1.0)

    rw, rh = r[2] - r[0], r[3] - r[1]
    dx = ((p[0] + p[2]) - (g[0] + g[2])) / (2 * rw)
    dy = ((p[1] + p[3]) - (g[1] + g[3])) / (2 * rh)
    huber = sum(0.5 * d * d if abs(d) < 1.0 else abs(d) - 0.5 for d in (dx, dy))
    return smooth_ln(ratio, sigma) + huber


def center_iou_value_and_grad(p, g, r, sigma: float) -> tuple[float, np.ndarray]:
    """Loss value and d loss / d (x1, y1, x2, y2) of the prediction."""
    px1, py1, px2, py2 = (float(v) for v in p)
    gx1, gy1, gx2, gy2 = (float(v) for v in g)
    cw, ch, w_raw, h_raw = _terms((px1, py1, px2, py2), (gx1, gy1, gx2, gy2))
    c_area = cw * ch
    iw, ih = max(w_raw, 0.0), max(h_raw, 0.0)
    inter = iw * ih

    # enclosing box: min() of the left/top edges, max() of the right/bottom ones
    d_area = np.array(
        [
            -ch * (1.0 if px1 < gx1 else 0.0),
            -cw * (1.0 if py1 < gy1 else 0.0),
            ch * (1.0 if px2 >= gx2 else 0.0),
            cw * (1.0 if py2 >= gy2 else 0.0),
        ]
    )

    # intersection: max() of the left/top edges, min() of the right/bottom ones
    d_inter = np.array(
        [
            ih * (-1.0 if (w_raw > 0 and px1 >= gx1) else 0.0),
            iw * (-1.0 if (h_raw > 0 and py1 >= gy1) else 0.0),
            ih * (1.0 if (w_raw >= 0 and px2 < gx2) else 0.0),
            iw * (1.0 if (h_raw >= 0 and py2 < gy2) else 0.0),
        ]
    )

    if c_area > 0:
        ratio = min(max(1.0 - inter / c_area, 0.0), 1.0)
        d_ratio = -(d_inter * c_area - inter * d_area) / (c_area * c_area)
    else:
        ratio = 1.0
        d_ratio = np.zeros(4)

    rw, rh = float(r[2]) - float(r[0]), float(r[3]) - float(r[1])
    dx = ((px1 + px2) - (gx1 + gx2)) / (2 * rw)
    dy = ((py1 + py2) - (gy1 + gy2)) / (2 * rh)
    fx, fy = smooth_l1_grad(dx), smooth_l1_grad(dy)
    d_center = np.array([fx / (2 * rw), fy / (2 * rh), fx / (2 * rw), fy / (2 * rh)])

    value = smooth_ln(ratio, sigma) + sum(
        0.5 * d * d if abs(d) < 1.0 else abs(d) - 0.5 for d in (dx, dy)
    )
    return value, smooth_ln_grad(ratio, sigma) * d_ratio + d_center


def grad_center_iou(
    pred: Box, gt: Box, ref: Box | None = None, cfg: LossConfig | None = None
) -> np.ndarray:
    """
    d center_iou_loss / d (x1, y1, x2, y2) of pred.

    Raises:
        InvalidBoxError: ref has zero width or height
    """
    cfg = cfg or LossConfig()
    ref = gt if ref is None else ref
    _check_reference(ref)
    _, grad = center_iou_value_and_grad(pred.to_array(), gt.to_array(), ref.to_array(), cfg.sigma)
    return grad
