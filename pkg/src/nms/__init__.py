"""
Non-maximum suppression: greedy, linear and gaussian Soft-NMS, and
Cosine-NMS, selectable by name through the variant registry.
"""

from src.schemas import NMSConfig, NMSVariant

from .base import Detection, RescoringStrategy, SuppressionStrategy, rank_order
from .postprocess import postprocess, run_nms
from .registry import build_variant, get_variant, list_variants, register_variant
from .variants import (
    CosineNMS,
    GaussianSoftNMS,
    GreedyNMS,
    LinearSoftNMS,
    cosine_nms,
    cosine_weight,
    greedy_nms,
    soft_nms_gaussian,
    soft_nms_linear,
)

__all__ = [
    "CosineNMS",
    "Detection",
    "GaussianSoftNMS",
    "GreedyNMS",
    "LinearSoftNMS",
    "NMSConfig",
    "NMSVariant",
    "RescoringStrategy",
    "SuppressionStrategy",
    "build_variant",
    "cosine_nms",
    "cosine_weight",
    "get_variant",
    "greedy_nms",
    "list_variants",
    "postprocess",
    "rank_order",
    "register_variant",
    "run_nms",
    "soft_nms_gaussian",
    "soft_nms_linear",
]
