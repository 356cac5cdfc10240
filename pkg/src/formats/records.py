"""
Line-delimited JSON record schemas.

Annotation:  {"image": "a", "full": [x1, y1, x2, y2], "visible": [...], "ignore": false}
Detection:   {"image": "a", "id": 3, "box": [x1, y1, x2, y2], "score": 0.9}
             (or flat "x1", "y1", "x2", "y2" fields instead of "box")
Anchor:      {"level": 0, "row": 2, "col": 5, "k": 1, "stride": 8, "x1": ..., "y1": ..., "x2": ..., "y2": ...}
"""

from pydantic import BaseModel, ConfigDict, Field, model_validator

BoxField = list[float]

DEFAULT_IMAGE = "default"


class AnnotationRecord(BaseModel):
    model_config = ConfigDict(extra="ignore")

    image: str = Field(default=DEFAULT_IMAGE, description="Image identifier")
    full: BoxField = Field(min_length=4, max_length=4, description="Full-body box")
    visible: BoxField | None = Field(
        default=None, min_length=4, max_length=4, description="Visible part, clamped into full"
    )
    ignore: bool = Field(default=False, description="Ignore region rather than a pedestrian")


class DetectionRecord(BaseModel):
    model_config = ConfigDict(extra="ignore")

    image: str = Field(default=DEFAULT_IMAGE, description="Image identifier")
    id: int | None = Field(default=None, description="Stable id; defaults to the record index")
    box: BoxField | None = Field(default=None, min_length=4, max_length=4)
    x1: float | None = None
    y1: float | None = None
    x2: float | None = None
    y2: float | None = None
    score: float = Field(ge=0.0, le=1.0, description="Confidence in [0, 1]")

    @model_validator(mode="after")
    def _box_present(self) -> "DetectionRecord":
        if self.box is None:
            flat = [self.x1, self.y1, self.x2, self.y2]
            if any(v is None for v in flat):
                raise ValueError("a detection needs either 'box' or all of x1, y1, x2, y2")
            self.box = [float(v) for v in flat]
        return self


class AnchorRecord(BaseModel):
    model_config = ConfigDict(extra="ignore")

    level: int = Field(ge=0, description="Pyramid level index")
    row: int = Field(ge=0)
    col: int = Field(ge=0)
    k: int = Field(ge=0, description="Index of the anchor width within the level")
    stride: int = Field(default=1, ge=1)
    x1: float
    y1: float
    x2: float
    y2: float
