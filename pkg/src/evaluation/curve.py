"""
Miss rate vs. false positives per image, and the log-average miss rate.

The curve is swept over every distinct detection score, starting at an
infinite threshold (fppi 0, miss rate 1). Consecutive points with the same
fppi are merged into the later one, so only threshold steps that add a
false positive open a new point.
"""

from dataclasses import dataclass

import numpy as np

from src.errors import DomainError, NoGroundTruthError
from src.schemas import EvalConfig
from src.utils.structured_logging import get_logger

from .matching import DetectionOutcome, ImageMatchResult

logger = get_logger("evaluation.curve")

# relative slack on "fppi <= reference"; 1/10 FP per image must land on 10^-1
_REF_RTOL = 1e-9


@dataclass(frozen=True)
class MissRateCurve:
    fppi: np.ndarray
    miss_rate: np.ndarray
    thresholds: np.ndarray | None = None

    def __post_init__(self):
        fppi = np.asarray(self.fppi, dtype=np.float64).ravel()
        miss = np.asarray(self.miss_rate, dtype=np.float64).ravel()
        if fppi.shape != miss.shape:
            raise DomainError(f"fppi has {fppi.size} points, miss_rate {miss.size}")
        if np.any(np.diff(fppi) < 0):
            raise DomainError("fppi must be non-decreasing along the curve")
        if np.any(fppi < 0) or np.any((miss < 0) | (miss > 1)):
            raise DomainError("fppi must be >= 0 and miss rates within [0, 1]")
        thresholds = (
            np.full(fppi.shape, np.nan)
            if self.thresholds is None
            else np.asarray(self.thresholds, dtype=np.float64).ravel()
        )
        object.__setattr__(self, "fppi", fppi)
        object.__setattr__(self, "miss_rate", miss)
        object.__setattr__(self, "thresholds", thresholds)

    def __len__(self) -> int:
        return int(self.fppi.size)

    @property
    def points(self) -> list[tuple[float, float]]:
        return list(zip(self.fppi.tolist(), self.miss_rate.tolist(), strict=True))

    def rows(self) -> list[dict[str, float]]:
        return [
            {"threshold": float(t), "fppi": float(f), "miss_rate": float(m)}
            for t, f, m in zip(self.thresholds, self.fppi, self.miss_rate, strict=True)
        ]


def miss_rate_curve(results: list[ImageMatchResult], n_images: int) -> MissRateCurve:
    """
    Raises:
        DomainError: n_images < 1
        NoGroundTruthError: no included ground truth in any image
    """
    if n_images < 1:
        raise DomainError(f"n_images must be >= 1, got {n_images}")
    n_gt = sum(r.n_included for r in results)
    if n_gt == 0:
        raise NoGroundTruthError("miss rate is undefined: no ground truth in the evaluated subset")

    scores = np.concatenate([r.det_scores for r in results]) if results else np.zeros(0)
    outcomes = [o for r in results for o in r.det_outcomes]
    is_tp = np.array([o is DetectionOutcome.TP for o in outcomes], dtype=bool)
    is_fp = np.array([o is DetectionOutcome.FP for o in outcomes], dtype=bool)

    order = np.argsort(-scores, kind="stable")
    scores, is_tp, is_fp = scores[order], is_tp[order], is_fp[order]
    tp = np.cumsum(is_tp)
    fp = np.cumsum(is_fp)

    # last index of every run of equal scores
    last = np.flatnonzero(np.append(scores[1:] != scores[:-1], True)) if scores.size else []

    thresholds = np.concatenate([[np.inf], scores[last]])
    fppi = np.concatenate([[0.0], fp[last] / n_images])
    miss = np.concatenate([[1.0], 1.0 - tp[last] / n_gt])

    keep = np.append(fppi[1:] != fppi[:-1], True)
    curve = MissRateCurve(fppi=fppi[keep], miss_rate=miss[keep], thresholds=thresholds[keep])
    logger.debug("curve_built", n_points=len(curve), n_gt=n_gt, n_images=n_images)
    return curve


def reference_points(cfg: EvalConfig | None = None) -> np.ndarray:
    cfg = cfg or EvalConfig()
    lo, hi = cfg.fppi_range
    return np.logspace(np.log10(lo), np.log10(hi), cfg.n_ref_points)


def sample_miss_rates(curve: MissRateCurve, cfg: EvalConfig | None = None) -> np.ndarray:
    """Miss rate of the last point with fppi <= each reference, else of the first point."""
    if len(curve) == 0:
        raise DomainError("cannot sample an empty curve")
    refs = reference_points(cfg)
    idx = np.searchsorted(curve.fppi, refs * (1.0 + _REF_RTOL), side="right") - 1
    return curve.miss_rate[np.maximum(idx, 0)]


def log_average_miss_rate(curve: MissRateCurve, cfg: EvalConfig | None = None) -> float:
    """Geometric mean of the sampled miss rates, each floored at miss_rate_floor."""
    cfg = cfg or EvalConfig()
    sampled = np.maximum(sample_miss_rates(curve, cfg), cfg.miss_rate_floor)
    if np.all(sampled == sampled[0]):
        return float(sampled[0])
    return float(np.exp(np.mean(np.log(sampled))))
