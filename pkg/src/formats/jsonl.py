"""
Parsing and serialization of line-delimited JSON records.

Parsers accept any iterable of lines (an open file, sys.stdin, a list of
strings), skip blank lines and report failures with 1-based line numbers.
Grouped results are ordered by image id, then by record order.

Serializers write floats with 9 significant digits so repeated runs are
byte-identical.
"""

import json
from collections.abc import Iterable, Iterator
from typing import TypeVar

from pydantic import BaseModel, ValidationError

from src.anchors import Anchor
from src.assignment import AssignedSample, GroundTruth
from src.errors import BoxkitError, RecordParseError
from src.geometry import Box
from src.nms import Detection

from .records import AnchorRecord, AnnotationRecord, DetectionRecord

M = TypeVar("M", bound=BaseModel)


def fmt(value: float) -> float:
    return float(f"{value:.9g}")


def _box_list(box: Box) -> list[float]:
    return [fmt(v) for v in box.to_list()]


def _dumps(record: dict) -> str:
    return json.dumps(record, separators=(", ", ": "))


def _records(lines: Iterable[str], model: type[M]) -> Iterator[tuple[int, M]]:
    for line_number, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        try:
            yield line_number, model.model_validate_json(line)
        except ValidationError as e:
            first = e.errors()[0]
            where = ".".join(str(p) for p in first.get("loc", ())) or "record"
            raise RecordParseError(f"{where}: {first['msg']}", line_number) from e


def _grouped(items: list[tuple[str, object]]) -> list[tuple[str, list]]:
    groups: dict[str, list] = {}
    for image, item in items:
        groups.setdefault(image, []).append(item)
    return sorted(groups.items())


def _box(values: list[float], line_number: int) -> Box:
    try:
        return Box(*values)
    except BoxkitError as e:
        raise RecordParseError(str(e), line_number) from e


# ==============================================
# Annotations
# ==============================================


def parse_annotations(lines: Iterable[str]) -> list[tuple[str, list[GroundTruth]]]:
    """
    Raises:
        RecordParseError: malformed JSON, missing field or invalid box
    """
    items = []
    for line_number, rec in _records(lines, AnnotationRecord):
        full = _box(rec.full, line_number)
        visible = _box(rec.visible, line_number) if rec.visible is not None else None
        items.append((rec.image, GroundTruth.from_boxes(full, visible, rec.ignore)))
    return _grouped(items)


def annotation_record(image: str, gt: GroundTruth) -> dict:
    record = {"image": image, "full": _box_list(gt.full_box)}
    if gt.visible_box is not None:
        record["visible"] = _box_list(gt.visible_box)
    record["ignore"] = gt.ignore
    return record


def serialize_annotations(groups: Iterable[tuple[str, list[GroundTruth]]]) -> Iterator[str]:
    for image, gts in groups:
        for gt in gts:
            yield _dumps(annotation_record(image, gt))


# ==============================================
# Detections
# ==============================================


def parse_detections(lines: Iterable[str]) -> list[tuple[str, list[Detection]]]:
    """
    Records without an id get their 0-based record index in the file.

    Raises:
        RecordParseError: malformed JSON, score outside [0, 1] or invalid box
    """
    items = []
    for index, (line_number, rec) in enumerate(_records(lines, DetectionRecord)):
        det_id = rec.id if rec.id is not None else index
        items.append((rec.image, Detection(_box(rec.box, line_number), rec.score, det_id)))
    return _grouped(items)


def detection_record(image: str, det: Detection) -> dict:
    return {"image": image, "id": det.id, "box": _box_list(det.box), "score": fmt(det.score)}


def serialize_detections(groups: Iterable[tuple[str, list[Detection]]]) -> Iterator[str]:
    for image, dets in groups:
        for det in dets:
            yield _dumps(detection_record(image, det))


# ==============================================
# Anchors and assignments
# ==============================================


def parse_anchor_records(lines: Iterable[str]) -> list[Anchor]:
    anchors = []
    for line_number, rec in _records(lines, AnchorRecord):
        anchors.append(
            Anchor(
                box=_box([rec.x1, rec.y1, rec.x2, rec.y2], line_number),
                level_index=rec.level,
                grid_row=rec.row,
                grid_col=rec.col,
                width_index=rec.k,
                stride=rec.stride,
            )
        )
    return anchors


def anchor_record(a: Anchor) -> dict:
    x1, y1, x2, y2 = _box_list(a.box)
    return {
        "level": a.level_index,
        "row": a.grid_row,
        "col": a.grid_col,
        "k": a.width_index,
        "stride": a.stride,
        "x1": x1,
        "y1": y1,
        "x2": x2,
        "y2": y2,
    }


def serialize_anchors(anchors: Iterable[Anchor]) -> Iterator[str]:
    for a in anchors:
        yield _dumps(anchor_record(a))


def assignment_record(image: str, step: int, sample: AssignedSample) -> dict:
    target = sample.regression_target
    return {
        "image": image,
        "step": step,
        "anchor": sample.anchor_index,
        "label": fmt(sample.label),
        "gt": sample.gt_index,
        "target": None if target is None else [fmt(v) for v in target],
        "excluded": sample.excluded,
    }


def serialize_assignments(image: str, step: int, samples: Iterable[AssignedSample]) -> Iterator[str]:
    for sample in samples:
        yield _dumps(assignment_record(image, step, sample))
