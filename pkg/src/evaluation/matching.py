"""
Caltech-style greedy matching of one image.

Detections are visited by score descending (ties by id). Each takes the
unmatched included GT with the highest IoU >= iou_thresh and becomes a TP.
A detection with no such GT is ignored when its intersection with some
ignore GT covers more than `ignore_ioa` of its own area, and is an FP
otherwise. Ignore GTs may absorb any number of detections.
"""

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from src.assignment import GroundTruth
from src.geometry import boxes_to_array, pairwise_intersection_over_first, pairwise_iou
from src.nms import Detection, rank_order


class DetectionOutcome(str, Enum):
    TP = "tp"
    FP = "fp"
    IGNORED = "ignored"


class GroundTruthOutcome(str, Enum):
    MATCHED = "matched"
    MISSED = "missed"
    IGNORED = "ignored"


@dataclass
class ImageMatchResult:
    """Outcomes of one image. Detection fields follow the visiting order."""

    det_ids: list[int] = field(default_factory=list)
    det_scores: np.ndarray = field(default_factory=lambda: np.zeros(0))
    det_outcomes: list[DetectionOutcome] = field(default_factory=list)
    gt_outcomes: list[GroundTruthOutcome] = field(default_factory=list)
    matched_gt: list[int | None] = field(default_factory=list)

    @property
    def n_included(self) -> int:
        return sum(o is not GroundTruthOutcome.IGNORED for o in self.gt_outcomes)

    @property
    def n_tp(self) -> int:
        return self.det_outcomes.count(DetectionOutcome.TP)

    @property
    def n_fp(self) -> int:
        return self.det_outcomes.count(DetectionOutcome.FP)


def match_detections(
    dets: list[Detection],
    gts: list[GroundTruth],
    iou_thresh: float = 0.5,
    ignore_ioa: float = 0.5,
) -> ImageMatchResult:
    ranked = rank_order(dets)
    included = [i for i, gt in enumerate(gts) if not gt.ignore]
    ignored = [i for i, gt in enumerate(gts) if gt.ignore]

    gt_outcomes = [
        GroundTruthOutcome.IGNORED if gt.ignore else GroundTruthOutcome.MISSED for gt in gts
    ]
    result = ImageMatchResult(
        det_ids=[d.id for d in ranked],
        det_scores=np.array([d.score for d in ranked], dtype=np.float64),
        gt_outcomes=gt_outcomes,
    )
    if not ranked:
        return result

    det_boxes = boxes_to_array([d.box for d in ranked])
    ious = pairwise_iou(det_boxes, boxes_to_array([gts[i].full_box for i in included]))
    ioas = pairwise_intersection_over_first(
        det_boxes, boxes_to_array([gts[i].full_box for i in ignored])
    )

    taken = np.zeros(len(included), dtype=bool)
    for k in range(len(ranked)):
        candidates = np.where(taken | (ious[k] < iou_thresh), -1.0, ious[k])
        if candidates.size and candidates.max() >= 0.0:
            j = int(np.argmax(candidates))
            taken[j] = True
            gt_outcomes[included[j]] = GroundTruthOutcome.MATCHED
            result.det_outcomes.append(DetectionOutcome.TP)
            result.matched_gt.append(included[j])
        elif ioas.shape[1] and ioas[k].max() > ignore_ioa:
            result.det_outcomes.append(DetectionOutcome.IGNORED)
            result.matched_gt.append(None)
        else:
            result.det_outcomes.append(DetectionOutcome.FP)
            result.matched_gt.append(None)
    return result
