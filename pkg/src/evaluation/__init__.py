"""
Pedestrian detection evaluation: occlusion subsets, Caltech matching,
miss-rate/FPPI curves and the log-average miss rate.
"""

from src.schemas import EvalConfig, Subset

from .curve import (
    MissRateCurve,
    log_average_miss_rate,
    miss_rate_curve,
    reference_points,
    sample_miss_rates,
)
from .evaluator import (
    ComparisonRow,
    EvalResult,
    compare_nms_variants,
    compare_regression_losses,
    evaluate,
)
from .matching import DetectionOutcome, GroundTruthOutcome, ImageMatchResult, match_detections
from .subsets import SubsetDecision, apply_subset, occlusion, subset_filter

__all__ = [
    "ComparisonRow",
    "DetectionOutcome",
    "EvalConfig",
    "EvalResult",
    "GroundTruthOutcome",
    "ImageMatchResult",
    "MissRateCurve",
    "Subset",
    "SubsetDecision",
    "apply_subset",
    "compare_nms_variants",
    "compare_regression_losses",
    "evaluate",
    "log_average_miss_rate",
    "match_detections",
    "miss_rate_curve",
    "occlusion",
    "reference_points",
    "sample_miss_rates",
    "subset_filter",
]
