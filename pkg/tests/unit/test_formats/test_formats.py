"""
Tests for line-delimited JSON records and CSV tables.
"""

import io
import json

import numpy as np
import pandas as pd
import pytest

from src.anchors import Anchor, default_anchor_levels, generate_anchors
from src.assignment import AssignedSample, GroundTruth, label_histogram
from src.errors import RecordParseError
from src.evaluation import ComparisonRow, MissRateCurve
from src.formats import (
    curve_frame,
    fmt,
    parse_anchor_records,
    parse_annotations,
    parse_detections,
    serialize_anchors,
    serialize_annotations,
    serialize_assignments,
    serialize_detections,
    write_comparison_csv,
    write_curve_csv,
    write_histogram_csv,
)
from src.geometry import Box
from src.nms import Detection

# ==================== Annotations ====================


class TestAnnotations:
    def test_parse_groups_by_image(self):
        lines = [
            '{"image": "b", "full": [0, 0, 40, 100]}',
            "",
            '{"image": "a", "full": [0, 0, 40, 100], "visible": [0, 0, 40, 50], "ignore": false}',
            '{"image": "b", "full": [100, 0, 140, 100], "ignore": true}',
        ]

        groups = parse_annotations(lines)

        assert [image for image, _ in groups] == ["a", "b"]
        (_, a_gts), (_, b_gts) = groups
        assert a_gts[0].visible_box == Box(0, 0, 40, 50)
        assert [gt.ignore for gt in b_gts] == [False, True]

    def test_visible_box_clamped(self):
        ((_, (gt,)),) = parse_annotations(['{"full": [0, 0, 10, 10], "visible": [-5, 0, 5, 20]}'])
        assert gt.visible_box == Box(0, 0, 5, 10)

    def test_default_image(self):
        ((image, _),) = parse_annotations(['{"full": [0, 0, 1, 1]}'])
        assert image == "default"

    def test_round_trip(self):
        groups = [("img", [GroundTruth.from_boxes(Box(0.5, 1, 40.25, 100), Box(0.5, 1, 40.25, 60))])]
        assert parse_annotations(list(serialize_annotations(groups))) == groups

    @pytest.mark.parametrize(
        "bad_line, fragment",
        [
            ("{not json", "line 2"),
            ('{"full": [0, 0, 1]}', "full"),
            ('{"full": [2, 0, 1, 1]}', "line 2"),
        ],
    )
    def test_errors_carry_line_numbers(self, bad_line, fragment):
        lines = ['{"full": [0, 0, 1, 1]}', bad_line]
        with pytest.raises(RecordParseError, match=fragment) as exc:
            parse_annotations(lines)
        assert exc.value.line_number == 2


# ==================== Detections ====================


class TestDetections:
    def test_box_and_flat_forms(self):
        lines = [
            '{"image": "a", "id": 7, "box": [0, 0, 10, 20], "score": 0.9}',
            '{"image": "a", "x1": 1, "y1": 2, "x2": 3, "y2": 4, "score": 0.5}',
        ]

        ((image, dets),) = parse_detections(lines)

        assert image == "a"
        assert dets[0] == Detection(Box(0, 0, 10, 20), 0.9, 7)
        assert dets[1] == Detection(Box(1, 2, 3, 4), 0.5, 1)

    def test_default_id_is_file_wide_record_index(self):
        lines = [
            '{"image": "a", "box": [0, 0, 1, 1], "score": 0.5}',
            '{"image": "b", "box": [0, 0, 1, 1], "score": 0.5}',
            '{"image": "b", "box": [0, 0, 2, 2], "score": 0.4}',
        ]

        groups = dict(parse_detections(lines))

        assert [d.id for d in groups["a"]] == [0]
        assert [d.id for d in groups["b"]] == [1, 2]

    def test_missing_box(self):
        with pytest.raises(RecordParseError, match="line 1"):
            parse_detections(['{"x1": 1, "y1": 2, "score": 0.5}'])

    def test_score_out_of_range(self):
        with pytest.raises(RecordParseError, match="score"):
            parse_detections(['{"box": [0, 0, 1, 1], "score": 1.5}'])

    def test_serialized_layout(self):
        det = Detection(Box(0, 0, 10, 1 / 3), 0.123456789123, 4)

        (line,) = serialize_detections([("a", [det])])

        assert line == '{"image": "a", "id": 4, "box": [0.0, 0.0, 10.0, 0.333333333], "score": 0.123456789}'

    def test_round_trip(self):
        groups = [("x", [Detection(Box(1.5, 2, 3, 4), 0.25, 0), Detection(Box(0, 0, 8, 8), 1.0, 3)])]
        assert parse_detections(list(serialize_detections(groups))) == groups


# ==================== Anchors and assignments ====================


class TestAnchorsAndAssignments:
    def test_anchor_round_trip(self):
        anchors = generate_anchors(32, 16, default_anchor_levels()[:1])
        parsed = parse_anchor_records(list(serialize_anchors(anchors)))
        assert len(parsed) == len(anchors)
        assert [(a.level_index, a.grid_row, a.grid_col, a.width_index) for a in parsed] == [
            (a.level_index, a.grid_row, a.grid_col, a.width_index) for a in anchors
        ]
        for got, want in zip(parsed, anchors, strict=True):
            np.testing.assert_allclose(got.box.to_array(), want.box.to_array(), rtol=1e-8)

    def test_anchor_stride_defaults(self):
        (anchor,) = parse_anchor_records(['{"level": 0, "row": 0, "col": 0, "k": 0, "x1": 0, "y1": 0, "x2": 2, "y2": 5}'])
        assert anchor == Anchor(Box(0, 0, 2, 5), 0, 0, 0, 0, 1)

    def test_assignment_records(self):
        samples = [
            AssignedSample(0, 1.0, 0, (0.1, 0.2, 0.0, 0.0)),
            AssignedSample(1, 0.0),
            AssignedSample(2, 0.0, excluded=True),
        ]

        records = [json.loads(line) for line in serialize_assignments("img", 2, samples)]

        assert records[0] == {
            "image": "img",
            "step": 2,
            "anchor": 0,
            "label": 1.0,
            "gt": 0,
            "target": [0.1, 0.2, 0.0, 0.0],
            "excluded": False,
        }
        assert records[1]["gt"] is None and records[1]["target"] is None
        assert records[2]["excluded"] is True


# ==================== CSV ====================


class TestTables:
    def test_curve_csv(self):
        curve = MissRateCurve(fppi=[0.0, 1 / 3], miss_rate=[1.0, 0.5], thresholds=[np.inf, 0.7])
        out = io.StringIO()

        write_curve_csv(curve, out)

        assert out.getvalue() == "threshold,fppi,miss_rate\ninf,0,1\n0.7,0.333333333,0.5\n"

    def test_curve_frame_columns(self):
        frame = curve_frame(MissRateCurve(fppi=[0.0], miss_rate=[0.0]))
        assert list(frame.columns) == ["threshold", "fppi", "miss_rate"]

    def test_histogram_csv(self):
        samples = [AssignedSample(i, label) for i, label in enumerate([0.1, 0.3, 0.3, 1.0, 0.0])]
        out = io.StringIO()

        write_histogram_csv(label_histogram(samples, bins=2), out)

        frame = pd.read_csv(io.StringIO(out.getvalue()))
        assert list(frame.columns) == ["bin_low", "bin_high", "count"]
        assert frame["count"].tolist() == [3, 0]

    def test_comparison_csv_with_empty_metrics(self):
        rows = [
            ComparisonRow("cosine", "reasonable", 0.5, 0.1234, 0.9),
            ComparisonRow("cosine", "heavy", 0.5, None, None),
        ]
        out = io.StringIO()

        write_comparison_csv(rows, out)

        lines = out.getvalue().splitlines()
        assert lines[0] == "variant,subset,iou_thresh,log_average_miss_rate,recall"
        assert lines[1] == "cosine,reasonable,0.5,0.1234,0.9"
        assert lines[2] == "cosine,heavy,0.5,,"

    def test_fmt(self):
        assert fmt(1 / 3) == 0.333333333
        assert fmt(2.0) == 2.0
