"""
Anchor Matcher - soft-label assignment with adaptive anchor matching

For every anchor:
1. IoU against the match box of every non-ignore ground truth (the visible
   box when the pedestrian is mostly occluded, the full box otherwise)
2. argmax over ground truths, ties to the lowest index
3. soft label from the best IoU
4. regression target towards the matched FULL box whenever label > 0
5. would-be negatives covering an ignore region (intersection / anchor
   area > 0.5) are excluded from every loss

No step forces a match for ground truths that no anchor reaches.
"""

from dataclasses import dataclass

import numpy as np

from src.anchors import Anchor, anchors_to_array
from src.errors import InvalidConfigError
from src.geometry import boxes_to_array, pairwise_intersection_over_first, pairwise_iou
from src.schemas import Thresholds
from src.utils.structured_logging import get_logger

from .encoding import encode_array, refine_boxes
from .ground_truth import GroundTruth, effective_match_box
from .labels import soft_labels

logger = get_logger("assignment")

IGNORE_REGION_IOA = 0.5


@dataclass(frozen=True, slots=True)
class AssignedSample:
    """Training target of one anchor."""

    anchor_index: int
    label: float
    gt_index: int | None = None
    regression_target: tuple[float, float, float, float] | None = None
    excluded: bool = False

    @property
    def is_positive(self) -> bool:
        return not self.excluded and self.label >= 1.0

    @property
    def is_semi_positive(self) -> bool:
        return not self.excluded and 0.0 < self.label < 1.0

    @property
    def is_negative(self) -> bool:
        return not self.excluded and self.label <= 0.0


def assign_boxes(
    boxes: np.ndarray,
    gts: list[GroundTruth],
    t: Thresholds,
    ignore_ioa: float = IGNORE_REGION_IOA,
) -> list[AssignedSample]:
    """assign() on an A x 4 array of anchor (or refined) boxes."""
    boxes = np.asarray(boxes, dtype=np.float64).reshape(-1, 4)
    n = len(boxes)

    candidates = [i for i, gt in enumerate(gts) if not gt.ignore]
    ignore_regions = [gt.full_box for gt in gts if gt.ignore]

    labels = np.zeros(n)
    gt_index = np.full(n, -1, dtype=np.int64)
    if candidates and n:
        match_boxes = boxes_to_array([effective_match_box(gts[i], t.t_vis) for i in candidates])
        ious = pairwise_iou(boxes, match_boxes)
        best = ious.argmax(axis=1)
        best_iou = np.clip(ious[np.arange(n), best], 0.0, 1.0)
        labels = soft_labels(best_iou, t)
        gt_index = np.asarray(candidates, dtype=np.int64)[best]

    excluded = np.zeros(n, dtype=bool)
    if ignore_regions and n:
        ioa = pairwise_intersection_over_first(boxes, boxes_to_array(ignore_regions)).max(axis=1)
        excluded = (ioa > ignore_ioa) & (labels <= 0.0)

    matched = np.flatnonzero(labels > 0.0)
    targets = np.zeros((n, 4))
    if matched.size:
        full_boxes = boxes_to_array([gts[int(i)].full_box for i in gt_index[matched]])
        targets[matched] = encode_array(boxes[matched], full_boxes)

    samples = []
    for i in range(n):
        label = float(labels[i])
        samples.append(
            AssignedSample(
                anchor_index=i,
                label=label,
                gt_index=int(gt_index[i]) if gt_index[i] >= 0 else None,
                regression_target=tuple(targets[i].tolist()) if label > 0.0 else None,
                excluded=bool(excluded[i]),
            )
        )

    logger.debug(
        "assignment_complete",
        anchors=n,
        gts=len(candidates),
        ignore_regions=len(ignore_regions),
        positives=int(np.count_nonzero(labels >= 1.0)),
        semi_positives=int(np.count_nonzero((labels > 0.0) & (labels < 1.0))),
        excluded=int(np.count_nonzero(excluded)),
    )
    return samples


def assign(
    anchors: list[Anchor], gts: list[GroundTruth], t: Thresholds
) -> list[AssignedSample]:
    """
    Assign a soft label and regression target to every anchor.

    gt_index refers to positions in `gts`. With no non-ignore ground truth
    every label is 0 and gt_index is None.
    """
    return assign_boxes(anchors_to_array(anchors), gts, t)


def assign_steps(
    anchors: list[Anchor],
    gts: list[GroundTruth],
    steps: list[Thresholds],
    step_deltas: list[np.ndarray] | None = None,
) -> list[list[AssignedSample]]:
    """
    Two-step (or n-step) refinement assignment.

    Step 1 matches the anchors with steps[0]. Step k matches the boxes
    produced by decoding step k-1's deltas onto step k-1's boxes, with
    steps[k-1]. Without deltas a step reuses the previous boxes.
    """
    if not steps:
        raise InvalidConfigError("At least one step is required")
    if step_deltas is not None and len(step_deltas) < len(steps) - 1:
        raise InvalidConfigError(
            f"{len(steps)} steps need {len(steps) - 1} delta arrays, got {len(step_deltas)}"
        )

    boxes = anchors_to_array(anchors)
    results = []
    for k, thresholds in enumerate(steps):
        if k > 0 and step_deltas is not None:
            boxes = refine_boxes(boxes, step_deltas[k - 1])
        results.append(assign_boxes(boxes, gts, thresholds))
    return results
