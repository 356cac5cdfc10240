"""
File formats: line-delimited JSON for annotations, detections, anchors and
assignments; CSV for curves, histograms and comparison tables.
"""

from .jsonl import (
    anchor_record,
    annotation_record,
    assignment_record,
    detection_record,
    fmt,
    parse_anchor_records,
    parse_annotations,
    parse_detections,
    serialize_anchors,
    serialize_annotations,
    serialize_assignments,
    serialize_detections,
)
from .records import AnchorRecord, AnnotationRecord, DetectionRecord
from .tables import (
    comparison_frame,
    curve_frame,
    histogram_frame,
    write_comparison_csv,
    write_curve_csv,
    write_frame,
    write_histogram_csv,
)

__all__ = [
    "AnchorRecord",
    "AnnotationRecord",
    "DetectionRecord",
    "anchor_record",
    "annotation_record",
    "assignment_record",
    "comparison_frame",
    "curve_frame",
    "detection_record",
    "fmt",
    "histogram_frame",
    "parse_anchor_records",
    "parse_annotations",
    "parse_detections",
    "serialize_anchors",
    "serialize_annotations",
    "serialize_assignments",
    "serialize_detections",
    "write_comparison_csv",
    "write_curve_csv",
    "write_frame",
    "write_histogram_csv",
]
