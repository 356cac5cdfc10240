"""
Default anchor boxes over a feature pyramid.
"""

from src.schemas import AnchorLevelConfig, default_anchor_levels

from .generator import (
    Anchor,
    anchors_to_array,
    expected_anchor_count,
    feature_map_size,
    generate_anchor_array,
    generate_anchors,
)

__all__ = [
    "Anchor",
    "AnchorLevelConfig",
    "anchors_to_array",
    "default_anchor_levels",
    "expected_anchor_count",
    "feature_map_size",
    "generate_anchor_array",
    "generate_anchors",
]
