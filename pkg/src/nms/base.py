"""
Base classes for non-maximum suppression variants.

This module provides:
- Detection: a scored box with a stable id
- SuppressionStrategy: abstract NMS variant
- RescoringStrategy: the iterative Soft-NMS schedule shared by the
  rescoring variants; subclasses only supply the decay weights
"""

import math
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Any

import numpy as np

from src.errors import DomainError
from src.geometry import Box, boxes_to_array, pairwise_iou


@dataclass(frozen=True, slots=True)
class Detection:
    """A scored box; id stays attached through rescoring."""

    box: Box
    score: float
    id: int

    def __post_init__(self):
        if not (math.isfinite(self.score) and 0.0 <= self.score <= 1.0):
            raise DomainError(f"Detection {self.id} score must lie in [0, 1], got {self.score}")

    def with_score(self, score: float) -> "Detection":
        return Detection(self.box, min(max(score, 0.0), 1.0), self.id)


def rank_order(dets: list[Detection]) -> list[Detection]:
    """Score descending, then id ascending."""
    return sorted(dets, key=lambda d: (-d.score, d.id))


class SuppressionStrategy(ABC):
    """
    Abstract NMS variant.

    Subclasses must implement:
    - name: registry identifier
    - run(): suppress or rescore a list of detections of one image
    """

    @property
    @abstractmethod
    def name(self) -> str:
        pass

    @abstractmethod
    def run(self, dets: list[Detection]) -> list[Detection]:
        """Return detections ordered by score descending, then id ascending."""

    def get_metadata(self) -> dict[str, Any]:
        return {"name": self.name, "description": (self.__doc__ or "").strip().splitlines()[0]}


class RescoringStrategy(SuppressionStrategy):
    """
    Iterative max-extraction schedule.

    Repeatedly take the highest-scoring unprocessed detection M (ties to the
    lower id) and multiply the score of every other unprocessed detection
    by weights(iou(M, b)). The processing order follows the rescored
    values. Every detection is returned, including those decayed to 0.
    """

    @abstractmethod
    def weights(self, ious: np.ndarray) -> np.ndarray:
        """Decay factor in [0, 1] for each overlap with M; 1 means untouched."""

    def run(self, dets: list[Detection]) -> list[Detection]:
        if not dets:
            return []

        ordered = sorted(dets, key=lambda d: d.id)
        scores = np.array([d.score for d in ordered], dtype=np.float64)
        boxes = boxes_to_array([d.box for d in ordered])
        ious = pairwise_iou(boxes, boxes)

        # pending mirrors scores for unprocessed detections, -inf once processed
        pending = scores.copy()
        active = np.ones(len(ordered), dtype=bool)
        for _ in range(len(ordered) - 1):
            # argmax returns the first maximum, i.e. the lowest id among ties
            m = int(np.argmax(pending))
            active[m] = False
            pending[m] = -np.inf
            # every variant leaves disjoint boxes untouched
            cols = np.flatnonzero(active & (ious[m] > 0.0))
            if cols.size:
                scores[cols] *= self.weights(ious[m, cols])
                pending[cols] = scores[cols]

        return rank_order([d.with_score(float(s)) for d, s in zip(ordered, scores, strict=True)])
