"""
Occlusion / height subsets

    reasonable  height >= 50 px and occlusion < 0.35
    bare        occlusion <= 0.10
    partial     0.10 < occlusion < 0.35
    heavy       occlusion >= 0.35
    all         every annotated pedestrian

occlusion = 1 - visible_ratio; height is the full-box height. A GT outside
the subset is turned into an ignore region so it neither counts as missed
nor penalises the detections that hit it.
"""

from enum import Enum

from src.assignment import GroundTruth, visible_ratio
from src.geometry import area
from src.schemas import Subset

REASONABLE_MAX_OCCLUSION = 0.35
BARE_MAX_OCCLUSION = 0.10
HEAVY_MIN_OCCLUSION = 0.35


class SubsetDecision(str, Enum):
    INCLUDE = "include"
    IGNORE = "ignore"


def occlusion(gt: GroundTruth) -> float:
    return 1.0 - visible_ratio(gt)


def _in_subset(gt: GroundTruth, subset: Subset, min_height: float) -> bool:
    if subset == Subset.ALL:
        return True
    occ = occlusion(gt)
    if subset == Subset.REASONABLE:
        return gt.height >= min_height and occ < REASONABLE_MAX_OCCLUSION
    if subset == Subset.BARE:
        return occ <= BARE_MAX_OCCLUSION
    if subset == Subset.PARTIAL:
        return BARE_MAX_OCCLUSION < occ < REASONABLE_MAX_OCCLUSION
    return occ >= HEAVY_MIN_OCCLUSION


def subset_filter(gt: GroundTruth, subset: Subset, min_height: float = 50.0) -> SubsetDecision:
    """Annotated ignore regions and degenerate boxes are always ignored."""
    if gt.ignore or area(gt.full_box) <= 0:
        return SubsetDecision.IGNORE
    if _in_subset(gt, Subset(subset), min_height):
        return SubsetDecision.INCLUDE
    return SubsetDecision.IGNORE


def apply_subset(gts: list[GroundTruth], subset: Subset, min_height: float = 50.0) -> list[GroundTruth]:
    return [
        gt.with_ignore(subset_filter(gt, subset, min_height) is SubsetDecision.IGNORE) for gt in gts
    ]
