"""
Anchor-to-ground-truth assignment

Soft labels for semi-positive anchors, adaptive (visible/full) matching,
regression target encoding and label statistics.
"""

from src.schemas import Thresholds

from .encoding import (
    decode_regression_target,
    encode_array,
    encode_regression_target,
    refine_boxes,
)
from .ground_truth import GroundTruth, effective_match_box, visible_ratio
from .labels import soft_label, soft_labels
from .matcher import AssignedSample, assign, assign_boxes, assign_steps
from .statistics import LabelHistogram, label_histogram, merge_histograms

__all__ = [
    "AssignedSample",
    "GroundTruth",
    "LabelHistogram",
    "Thresholds",
    "assign",
    "assign_boxes",
    "assign_steps",
    "decode_regression_target",
    "effective_match_box",
    "encode_array",
    "encode_regression_target",
    "label_histogram",
    "merge_histograms",
    "refine_boxes",
    "soft_label",
    "soft_labels",
    "visible_ratio",
]
