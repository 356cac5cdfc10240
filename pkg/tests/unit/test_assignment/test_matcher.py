"""
Tests for soft labels, adaptive matching, target encoding and label statistics.

Testing strategy: hand-worked fixtures plus a 10k-anchor scene recounted by
brute force with scalar IoU.
"""

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from pydantic import ValidationError

from src.anchors import Anchor, default_anchor_levels, generate_anchors
from src.assignment import (
    AssignedSample,
    GroundTruth,
    Thresholds,
    assign,
    assign_boxes,
    assign_steps,
    decode_regression_target,
    effective_match_box,
    encode_regression_target,
    label_histogram,
    merge_histograms,
    refine_boxes,
    soft_label,
    soft_labels,
    visible_ratio,
)
from src.errors import DomainError, InvalidBoxError, InvalidConfigError
from src.geometry import Box, boxes_to_array, iou

STEP1 = Thresholds(t_neg=0.4, t_pos=0.5)


def anchor_of(box: Box) -> Anchor:
    return Anchor(box=box, level_index=0, grid_row=0, grid_col=0, width_index=0, stride=8)


# ============================================================================
# Soft labels
# ============================================================================


class TestSoftLabel:
    """Linear ramp between t_neg and t_pos"""

    @pytest.mark.parametrize(
        "value, expected", [(0.30, 0.0), (0.425, 0.25), (0.45, 0.5), (0.55, 1.0)]
    )
    def test_fixture_set(self, value, expected):
        assert soft_label(value, STEP1) == pytest.approx(expected, abs=1e-12)

    def test_boundaries(self):
        assert soft_label(0.4, STEP1) == 0.0
        assert soft_label(0.5, STEP1) == 1.0

    @pytest.mark.parametrize("value", [-0.01, 1.01])
    def test_rejects_out_of_range(self, value):
        with pytest.raises(DomainError):
            soft_label(value, STEP1)

    def test_vectorised_matches_scalar(self):
        values = np.linspace(0.0, 1.0, 201)
        expected = [soft_label(float(v), STEP1) for v in values]
        np.testing.assert_allclose(soft_labels(values, STEP1), expected, atol=1e-12)

    @given(st.floats(0.0, 1.0), st.floats(0.0, 1.0))
    def test_monotone(self, a, b):
        lo, hi = sorted((a, b))
        assert soft_label(lo, STEP1) <= soft_label(hi, STEP1)

    def test_thresholds_must_be_ordered(self):
        with pytest.raises(ValidationError):
            Thresholds(t_neg=0.5, t_pos=0.5)


# ============================================================================
# Ground truths
# ============================================================================


class TestGroundTruth:
    def test_visible_ratio(self):
        gt = GroundTruth.from_boxes(Box(0, 0, 10, 20), Box(0, 0, 10, 10))
        assert visible_ratio(gt) == pytest.approx(0.5)
        assert visible_ratio(GroundTruth(Box(0, 0, 10, 10), Box(0, 0, 10, 4))) == pytest.approx(0.4)
        assert visible_ratio(GroundTruth(Box(0, 0, 10, 10))) == 1.0

    def test_visible_is_clamped_into_full(self):
        gt = GroundTruth.from_boxes(Box(0, 0, 10, 10), Box(5, 5, 20, 20))
        assert gt.visible_box == Box(5, 5, 10, 10)
        assert visible_ratio(gt) <= 1.0

    def test_zero_area_full_box(self):
        with pytest.raises(InvalidBoxError):
            visible_ratio(GroundTruth(Box(0, 0, 0, 10)))

    def test_effective_match_box(self):
        occluded = GroundTruth.from_boxes(Box(0, 0, 10, 10), Box(0, 0, 10, 4))
        mostly_visible = GroundTruth.from_boxes(Box(0, 0, 10, 10), Box(0, 0, 10, 8))
        assert effective_match_box(occluded, 0.5) == Box(0, 0, 10, 4)
        assert effective_match_box(mostly_visible, 0.5) == Box(0, 0, 10, 10)
        assert effective_match_box(GroundTruth(Box(0, 0, 10, 10)), 0.5) == Box(0, 0, 10, 10)


# ============================================================================
# Encoding
# ============================================================================


class TestEncoding:
    def test_identity(self):
        b = Box(3, 4, 13, 30)
        assert encode_regression_target(b, b) == pytest.approx((0, 0, 0, 0))

    def test_center_shift(self):
        deltas = encode_regression_target(Box(0, 0, 10, 10), Box(5, 0, 15, 10))
        assert deltas == pytest.approx((0.5, 0, 0, 0))

    def test_round_trip(self):
        anchor, gt = Box(0, 0, 16, 39), Box(3.5, -2.0, 25.0, 61.25)
        decoded = decode_regression_target(anchor, encode_regression_target(anchor, gt))
        np.testing.assert_allclose(decoded.to_array(), gt.to_array(), atol=1e-9)

    def test_zero_area_anchor(self):
        with pytest.raises(InvalidBoxError):
            encode_regression_target(Box(0, 0, 0, 10), Box(0, 0, 10, 10))

    def test_refine_boxes_matches_decode(self):
        anchors = boxes_to_array([Box(0, 0, 10, 20), Box(5, 5, 9, 15)])
        deltas = np.array([[0.1, -0.2, 0.3, 0.0], [0.0, 0.5, -0.1, 0.2]])
        refined = refine_boxes(anchors, deltas)
        for a, d, r in zip(anchors, deltas, refined, strict=True):
            np.testing.assert_allclose(decode_regression_target(Box.from_array(a), d).to_array(), r)

    def test_refine_shape_mismatch(self):
        with pytest.raises(DomainError):
            refine_boxes(np.zeros((2, 4)), np.zeros((3, 4)))


# ============================================================================
# Assignment
# ============================================================================


class TestAssign:
    """Argmax assignment with adaptive matching and ignore regions"""

    def test_no_ground_truth(self):
        samples = assign([anchor_of(Box(0, 0, 10, 10))] * 3, [], STEP1)
        assert all(s.label == 0.0 and s.regression_target is None for s in samples)

    def test_exact_match(self):
        (sample,) = assign([anchor_of(Box(0, 0, 10, 25))], [GroundTruth(Box(0, 0, 10, 25))], STEP1)
        assert sample.label == 1.0
        assert sample.gt_index == 0
        assert sample.regression_target == pytest.approx((0, 0, 0, 0))

    def test_semi_positive_gets_target(self):
        # anchor inside the gt covering 45% of it
        (sample,) = assign([anchor_of(Box(0, 0, 10, 4.5))], [GroundTruth(Box(0, 0, 10, 10))], STEP1)
        assert sample.label == pytest.approx(0.5, abs=1e-12)
        assert sample.is_semi_positive
        assert sample.regression_target is not None

    def test_occluded_pedestrian_matches_visible_box(self):
        gt = GroundTruth.from_boxes(Box(0, 0, 40, 100), Box(0, 0, 40, 30))
        (sample,) = assign([anchor_of(Box(0, 0, 40, 30))], [gt], STEP1)

        assert sample.label == 1.0
        # regression still targets the full box
        decoded = decode_regression_target(Box(0, 0, 40, 30), sample.regression_target)
        np.testing.assert_allclose(decoded.to_array(), [0, 0, 40, 100], atol=1e-9)

    def test_ties_go_to_lowest_index(self):
        gts = [GroundTruth(Box(0, 0, 10, 10)), GroundTruth(Box(0, 0, 10, 10))]
        (sample,) = assign([anchor_of(Box(0, 0, 10, 10))], gts, STEP1)
        assert sample.gt_index == 0

    def test_gt_index_refers_to_original_list(self):
        gts = [GroundTruth(Box(100, 100, 200, 200), ignore=True), GroundTruth(Box(0, 0, 10, 10))]
        (sample,) = assign([anchor_of(Box(0, 0, 10, 10))], gts, STEP1)
        assert sample.gt_index == 1

    def test_negative_inside_ignore_region_is_excluded(self):
        gts = [GroundTruth(Box(0, 0, 100, 100), ignore=True)]
        inside, outside = assign(
            [anchor_of(Box(10, 10, 20, 20)), anchor_of(Box(300, 300, 310, 310))], gts, STEP1
        )
        assert inside.excluded and not inside.is_negative
        assert not outside.excluded and outside.is_negative

    def test_positive_is_never_excluded(self):
        gts = [GroundTruth(Box(0, 0, 10, 10)), GroundTruth(Box(0, 0, 50, 50), ignore=True)]
        (sample,) = assign([anchor_of(Box(0, 0, 10, 10))], gts, STEP1)
        assert sample.is_positive and not sample.excluded

    def test_scale_invariance(self):
        anchors = generate_anchors(160, 120, default_anchor_levels()[:2])
        gts = [GroundTruth.from_boxes(Box(20, 10, 44, 70), Box(20, 10, 44, 30))]
        base = [s.label for s in assign(anchors, gts, STEP1)]

        scaled_boxes = [a.box.scale(4.0) for a in anchors]
        scaled_gts = [GroundTruth.from_boxes(Box(80, 40, 176, 280), Box(80, 40, 176, 120))]
        scaled = [s.label for s in assign_boxes(boxes_to_array(scaled_boxes), scaled_gts, STEP1)]
        assert base == scaled

    @pytest.mark.slow
    def test_counts_match_brute_force(self, rng):
        # Arrange: ~10k anchors, a handful of pedestrians, one ignore region
        anchors = generate_anchors(640, 480, default_anchor_levels())
        gts = []
        for _ in range(6):
            x, y = rng.uniform(0, 400), rng.uniform(0, 200)
            h = rng.uniform(40, 120)
            full = Box(float(x), float(y), float(x + 0.41 * h), float(y + h))
            vis_h = h * rng.uniform(0.2, 1.0)
            gts.append(GroundTruth.from_boxes(full, Box(full.x1, full.y1, full.x2, float(y + vis_h))))
        gts.append(GroundTruth(Box(300, 200, 420, 300), ignore=True))
        assert len(anchors) >= 10_000

        # Act
        samples = assign(anchors, gts, STEP1)

        # Assert
        expected = {"positive": 0, "semi": 0, "negative": 0, "excluded": 0}
        region = gts[-1].full_box
        for anchor in anchors:
            best = max(iou(anchor.box, effective_match_box(gt, STEP1.t_vis)) for gt in gts[:-1])
            label = soft_label(best, STEP1)
            inter = max(0.0, min(anchor.box.x2, region.x2) - max(anchor.box.x1, region.x1)) * max(
                0.0, min(anchor.box.y2, region.y2) - max(anchor.box.y1, region.y1)
            )
            covered = inter / (anchor.box.width * anchor.box.height) > 0.5
            if label <= 0.0 and covered:
                expected["excluded"] += 1
            elif label >= 1.0:
                expected["positive"] += 1
            elif label > 0.0:
                expected["semi"] += 1
            else:
                expected["negative"] += 1

        hist = label_histogram(samples, 10)
        assert hist.positive == expected["positive"]
        assert hist.semi_positive == expected["semi"]
        assert hist.negative == expected["negative"]
        assert hist.excluded == expected["excluded"]
        assert hist.total == len(anchors)

    def test_decoded_targets_reproduce_full_boxes(self):
        anchors = generate_anchors(200, 160, default_anchor_levels()[:2])
        gts = [GroundTruth(Box(40, 30, 64, 90)), GroundTruth(Box(120, 20, 150, 95))]
        for sample in assign(anchors, gts, STEP1):
            if sample.label > 0:
                decoded = decode_regression_target(anchors[sample.anchor_index].box, sample.regression_target)
                np.testing.assert_allclose(
                    decoded.to_array(), gts[sample.gt_index].full_box.to_array(), atol=1e-9
                )


class TestAssignSteps:
    """Two-step refinement"""

    def test_without_deltas_each_step_uses_its_thresholds(self):
        anchors = [anchor_of(Box(0, 0, 10, 5.5))]  # IoU 0.55 with the gt
        gts = [GroundTruth(Box(0, 0, 10, 10))]
        step1, step2 = assign_steps(anchors, gts, [STEP1, Thresholds(t_neg=0.5, t_pos=0.6)])
        assert step1[0].label == 1.0
        assert step2[0].label == pytest.approx(0.5, abs=1e-9)

    def test_second_step_matches_refined_boxes(self):
        anchors = [anchor_of(Box(0, 0, 10, 10))]
        gts = [GroundTruth(Box(20, 0, 30, 10))]
        deltas = [np.array([[2.0, 0.0, 0.0, 0.0]])]
        step1, step2 = assign_steps(anchors, gts, [STEP1, STEP1], deltas)
        assert step1[0].label == 0.0
        assert step2[0].label == 1.0
        assert step2[0].regression_target == pytest.approx((0, 0, 0, 0))

    def test_requires_steps(self):
        with pytest.raises(InvalidConfigError):
            assign_steps([anchor_of(Box(0, 0, 1, 1))], [], [])


# ============================================================================
# Statistics
# ============================================================================


class TestLabelHistogram:
    def test_fixture(self):
        samples = [AssignedSample(i, label) for i, label in enumerate([0.1, 0.5, 0.9, 1.0, 0.0])]
        hist = label_histogram(samples, bins=2)
        assert hist.counts.tolist() == [2, 1]
        assert (hist.positive, hist.semi_positive, hist.negative) == (1, 3, 1)

    def test_labels_on_bin_edges_are_right_closed(self):
        # 0.3 * 10 and 0.7 * 10 are not exact in floating point
        samples = [AssignedSample(i, label) for i, label in enumerate([0.3, 0.7, 0.1, 0.6])]
        hist = label_histogram(samples, bins=10)
        assert np.flatnonzero(hist.counts).tolist() == [0, 2, 5, 6]

    def test_all_negative(self):
        hist = label_histogram([AssignedSample(i, 0.0) for i in range(7)], bins=4)
        assert hist.counts.tolist() == [0, 0, 0, 0]
        assert hist.negative == 7

    def test_excluded_not_binned(self):
        hist = label_histogram([AssignedSample(0, 0.0, excluded=True), AssignedSample(1, 0.3)], 2)
        assert hist.excluded == 1
        assert hist.total == 2
        assert hist.rows() == [(0.0, 0.5, 1), (0.5, 1.0, 0)]

    def test_merge(self):
        a = label_histogram([AssignedSample(0, 0.2)], 2)
        b = label_histogram([AssignedSample(0, 0.7), AssignedSample(1, 1.0)], 2)
        merged = merge_histograms([a, b])
        assert merged.counts.tolist() == [1, 1]
        assert merged.positive == 1

    def test_rejects_zero_bins(self):
        with pytest.raises(InvalidConfigError):
            label_histogram([], 0)
