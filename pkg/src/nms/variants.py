"""
NMS variants

    greedy    discard every box with IoU >= N_t against a kept box
    linear    Soft-NMS, weight 1 - iou for iou >= N_t
    gaussian  Soft-NMS, weight exp(-iou^2 / sigma) for every overlapping box
    cosine    weight cos(pi/2 * (iou - N_t) / (1 - N_t)) for iou >= N_t

The cosine weight is 1 at N_t, strictly decreasing, and exactly 0 for
duplicates (iou = 1). The gaussian one never reaches 0.
"""

import math

import numpy as np

from src.errors import DomainError
from src.geometry import boxes_to_array, pairwise_iou

from .base import Detection, RescoringStrategy, SuppressionStrategy, rank_order


def _check_threshold(n_t: float):
    if not 0.0 <= n_t < 1.0:
        raise DomainError(f"N_t must lie in [0, 1), got {n_t}")


def cosine_weight(iou_val: float, n_t: float) -> float:
    """
    Raises:
        DomainError: n_t outside [0, 1) or iou_val outside [n_t, 1]
    """
    _check_threshold(n_t)
    if not n_t <= iou_val <= 1.0:
        raise DomainError(f"cosine_weight needs n_t <= iou <= 1, got iou={iou_val}, n_t={n_t}")
    if iou_val >= 1.0:
        return 0.0
    return math.cos(math.pi / 2 * (iou_val - n_t) / (1.0 - n_t))


class GreedyNMS(SuppressionStrategy):
    """Classic NMS: keep the best box, drop everything overlapping it by N_t or more."""

    def __init__(self, n_t: float = 0.3):
        _check_threshold(n_t)
        self.n_t = n_t

    @property
    def name(self) -> str:
        return "greedy"

    def run(self, dets: list[Detection]) -> list[Detection]:
        if not dets:
            return []
        ranked = rank_order(dets)
        boxes = boxes_to_array([d.box for d in ranked])
        ious = pairwise_iou(boxes, boxes)

        suppressed = np.zeros(len(ranked), dtype=bool)
        kept = []
        for i, det in enumerate(ranked):
            if suppressed[i]:
                continue
            kept.append(det)
            suppressed |= ious[i] >= self.n_t
        return kept


class LinearSoftNMS(RescoringStrategy):
    """Soft-NMS with a linear decay gated at N_t."""

    def __init__(self, n_t: float = 0.3):
        _check_threshold(n_t)
        self.n_t = n_t

    @property
    def name(self) -> str:
        return "linear"

    def weights(self, ious: np.ndarray) -> np.ndarray:
        return np.where(ious >= self.n_t, 1.0 - ious, 1.0)


class GaussianSoftNMS(RescoringStrategy):
    """Soft-NMS with a gaussian decay on every overlapping box."""

    def __init__(self, sigma: float = 0.5):
        if not sigma > 0:
            raise DomainError(f"sigma must be positive, got {sigma}")
        self.sigma = sigma

    @property
    def name(self) -> str:
        return "gaussian"

    def weights(self, ious: np.ndarray) -> np.ndarray:
        return np.where(ious > 0.0, np.exp(-(ious * ious) / self.sigma), 1.0)


class CosineNMS(RescoringStrategy):
    """Cosine-NMS: untouched below N_t, cosine decay to exactly 0 at full overlap."""

    def __init__(self, n_t: float = 0.3):
        _check_threshold(n_t)
        self.n_t = n_t

    @property
    def name(self) -> str:
        return "cosine"

    def weights(self, ious: np.ndarray) -> np.ndarray:
        decay = np.cos(np.pi / 2 * (ious - self.n_t) / (1.0 - self.n_t))
        decay = np.where(ious >= 1.0, 0.0, decay)
        return np.where(ious >= self.n_t, decay, 1.0)


def greedy_nms(dets: list[Detection], n_t: float) -> list[Detection]:
    return GreedyNMS(n_t).run(dets)


def soft_nms_linear(dets: list[Detection], n_t: float) -> list[Detection]:
    return LinearSoftNMS(n_t).run(dets)


def soft_nms_gaussian(dets: list[Detection], sigma_g: float) -> list[Detection]:
    return GaussianSoftNMS(sigma_g).run(dets)


def cosine_nms(dets: list[Detection], n_t: float) -> list[Detection]:
    return CosineNMS(n_t).run(dets)
