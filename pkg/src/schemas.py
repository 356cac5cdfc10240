from enum import Enum

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

# === Anchor Configuration ===


class AnchorLevelConfig(BaseModel):
    """One pyramid level of default anchors: stride, anchor widths and aspect ratio."""

    model_config = ConfigDict(frozen=True)

    stride: int = Field(ge=1, description="Feature-map stride in pixels")
    widths: list[float] = Field(
        min_length=1, description="Anchor widths in pixels, one anchor per width per cell"
    )
    aspect_ratio: float = Field(
        gt=0.0, description="Width / height; 0.41 gives tall pedestrian-shaped anchors"
    )

    @field_validator("widths")
    @classmethod
    def _positive_widths(cls, widths: list[float]) -> list[float]:
        if any(w <= 0 for w in widths):
            raise ValueError(f"anchor widths must be positive, got {widths}")
        return widths


def default_anchor_levels() -> list[AnchorLevelConfig]:
    """Four-level pedestrian anchor configuration (strides 8 to 64, ratio 0.41)."""
    return [
        AnchorLevelConfig(stride=8, widths=[16.0, 24.0], aspect_ratio=0.41),
        AnchorLevelConfig(stride=16, widths=[32.0, 48.0], aspect_ratio=0.41),
        AnchorLevelConfig(stride=32, widths=[64.0, 96.0], aspect_ratio=0.41),
        AnchorLevelConfig(stride=64, widths=[128.0, 160.0], aspect_ratio=0.41),
    ]


# === Sample Assignment ===


class Thresholds(BaseModel):
    """
    IoU thresholds of one regression step.

    Anchors below t_neg are negatives, above t_pos positives, and the ones
    in between get a soft label on a linear ramp. Ground truths whose
    visible ratio is below t_vis are matched through their visible box.
    """

    model_config = ConfigDict(frozen=True)

    t_neg: float = Field(default=0.4, ge=0.0, le=1.0, description="Negative IoU threshold")
    t_pos: float = Field(default=0.5, ge=0.0, le=1.0, description="Positive IoU threshold")
    t_vis: float = Field(
        default=0.5, ge=0.0, le=1.0, description="Visible-ratio threshold for adaptive matching"
    )

    @model_validator(mode="after")
    def _ordered(self) -> "Thresholds":
        if not self.t_neg < self.t_pos:
            raise ValueError(f"t_neg must be < t_pos, got {self.t_neg} >= {self.t_pos}")
        return self


def default_steps() -> list[Thresholds]:
    """Thresholds of the two regression steps: {0.4, 0.5} then {0.5, 0.6}."""
    return [Thresholds(t_neg=0.4, t_pos=0.5), Thresholds(t_neg=0.5, t_pos=0.6)]


# === Losses ===


class LossConfig(BaseModel):
    """Parameters of the regression and classification losses."""

    model_config = ConfigDict(frozen=True, populate_by_name=True)

    sigma: float = Field(
        default=0.5, ge=0.0, lt=1.0, description="smooth_ln knee; linear tail above it"
    )
    lambda_: float = Field(
        default=1.0, ge=0.0, alias="lambda", description="Weight of the regression term; 0 drops it"
    )
    alpha: float = Field(default=0.25, gt=0.0, lt=1.0, description="Focal weight of positives")
    beta: float = Field(default=0.1, ge=0.0, description="Weight of semi-positive samples")
    gamma: float = Field(default=2.0, ge=0.0, description="Focusing exponent")
    prob_eps: float = Field(
        default=1e-7, gt=0.0, lt=0.5, description="Probabilities are clamped to [eps, 1 - eps]"
    )


# === Non-Maximum Suppression ===


class NMSVariant(str, Enum):
    GREEDY = "greedy"
    LINEAR = "linear"
    GAUSSIAN = "gaussian"
    COSINE = "cosine"


class NMSConfig(BaseModel):
    """NMS variant and the inference postprocess around it."""

    model_config = ConfigDict(frozen=True)

    variant: NMSVariant = Field(default=NMSVariant.COSINE)
    n_t: float = Field(default=0.3, ge=0.0, lt=1.0, description="Overlap threshold N_t")
    sigma: float = Field(default=0.5, gt=0.0, description="Gaussian Soft-NMS spread")
    conf_thresh: float = Field(default=0.05, ge=0.0, le=1.0)
    pre_top_k: int = Field(default=1000, ge=1, description="Boxes entering NMS")
    final_top_k: int = Field(default=150, ge=1, description="Boxes kept after NMS")


# === Evaluation ===


class Subset(str, Enum):
    """Ground-truth subsets by height and occlusion."""

    ALL = "all"
    REASONABLE = "reasonable"
    BARE = "bare"
    PARTIAL = "partial"
    HEAVY = "heavy"


class EvalConfig(BaseModel):
    """Caltech-style miss-rate evaluation settings."""

    model_config = ConfigDict(frozen=True)

    iou_thresh: float = Field(default=0.5, gt=0.0, le=1.0)
    subset: Subset = Field(default=Subset.REASONABLE)
    fppi_range: tuple[float, float] = Field(default=(1e-2, 1.0))
    n_ref_points: int = Field(default=9, ge=2)
    min_height: float = Field(default=50.0, ge=0.0, description="Reasonable-subset height (px)")
    ignore_ioa: float = Field(
        default=0.5, ge=0.0, le=1.0, description="Intersection-over-detection for ignore regions"
    )
    miss_rate_floor: float = Field(default=1e-10, gt=0.0)

    @field_validator("fppi_range")
    @classmethod
    def _valid_range(cls, value: tuple[float, float]) -> tuple[float, float]:
        lo, hi = value
        if not 0 < lo < hi:
            raise ValueError(f"fppi_range must satisfy 0 < low < high, got {value}")
        return value


# === Run Configuration ===


class RunConfig(BaseModel):
    """Everything a batch run needs; defaults reproduce the pedestrian detector settings."""

    anchor_levels: list[AnchorLevelConfig] = Field(
        default_factory=default_anchor_levels, min_length=1
    )
    steps: list[Thresholds] = Field(default_factory=default_steps, min_length=1)
    loss: LossConfig = Field(default_factory=LossConfig)
    nms: NMSConfig = Field(default_factory=NMSConfig)
    eval: EvalConfig = Field(default_factory=EvalConfig)
