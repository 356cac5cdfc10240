"""
Soft labels

An anchor whose best IoU lies between t_neg and t_pos gets a fractional
label on the linear ramp (iou - t_neg) / (t_pos - t_neg). The ramp
endpoints give iou == t_neg -> 0 and iou == t_pos -> 1.
"""

import numpy as np

from src.errors import DomainError
from src.schemas import Thresholds


def soft_label(iou: float, t: Thresholds) -> float:
    """
    Raises:
        DomainError: iou outside [0, 1]
    """
    if not 0.0 <= iou <= 1.0:
        raise DomainError(f"iou must lie in [0, 1], got {iou}")
    if iou <= t.t_neg:
        return 0.0
    if iou >= t.t_pos:
        return 1.0
    return (iou - t.t_neg) / (t.t_pos - t.t_neg)


def soft_labels(ious: np.ndarray, t: Thresholds) -> np.ndarray:
    """Vectorised soft_label."""
    ious = np.asarray(ious, dtype=np.float64)
    if ious.size and (ious.min() < 0.0 or ious.max() > 1.0):
        raise DomainError("ious must lie in [0, 1]")
    labels = (ious - t.t_neg) / (t.t_pos - t.t_neg)
    labels = np.clip(labels, 0.0, 1.0)
    labels[ious <= t.t_neg] = 0.0
    labels[ious >= t.t_pos] = 1.0
    return labels
