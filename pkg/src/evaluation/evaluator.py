"""
Dataset-level evaluation and side-by-side comparisons.

Usage:
    from src.evaluation import evaluate

    result = evaluate(dets_by_image, gts_by_image, EvalConfig(subset="heavy"))
    print(f"MR-2 {100 * result.log_average_miss_rate:.2f}%")
"""

from dataclasses import dataclass
from itertools import product

from src.assignment import GroundTruth
from src.errors import NoGroundTruthError
from src.geometry import Box
from src.losses import REGRESSION_LOSS_KINDS, regression_loss
from src.nms import Detection, postprocess
from src.schemas import EvalConfig, LossConfig, NMSConfig, Subset
from src.utils.parallel import map_images
from src.utils.structured_logging import get_logger, log_performance

from .curve import MissRateCurve, log_average_miss_rate, miss_rate_curve
from .matching import ImageMatchResult, match_detections
from .subsets import apply_subset

logger = get_logger("evaluation")


@dataclass
class EvalResult:
    curve: MissRateCurve
    log_average_miss_rate: float
    recall: float
    n_images: int
    n_included_gts: int
    n_tp: int
    n_fp: int
    per_image: dict[str, ImageMatchResult]


@dataclass(frozen=True)
class ComparisonRow:
    variant: str
    subset: str
    iou_thresh: float
    log_average_miss_rate: float | None
    recall: float | None


def evaluate(
    dets_by_image: dict[str, list[Detection]],
    gts_by_image: dict[str, list[GroundTruth]],
    cfg: EvalConfig | None = None,
    threads: int | None = None,
) -> EvalResult:
    """
    Evaluate every image that has annotations or detections.

    Raises:
        NoGroundTruthError: the subset leaves no included ground truth
    """
    cfg = cfg or EvalConfig()
    images = sorted(set(dets_by_image) | set(gts_by_image))
    if not images:
        raise NoGroundTruthError("nothing to evaluate: no images")

    def _match(image: str) -> ImageMatchResult:
        gts = apply_subset(gts_by_image.get(image, []), cfg.subset, cfg.min_height)
        return match_detections(dets_by_image.get(image, []), gts, cfg.iou_thresh, cfg.ignore_ioa)

    with log_performance(logger, "match_images", n_images=len(images)):
        results = map_images(_match, images, threads)
    curve = miss_rate_curve(results, len(images))
    mr = log_average_miss_rate(curve, cfg)

    n_gt = sum(r.n_included for r in results)
    n_tp = sum(r.n_tp for r in results)
    logger.info(
        "evaluation_complete",
        subset=Subset(cfg.subset).value,
        iou_thresh=cfg.iou_thresh,
        n_images=len(images),
        n_gt=n_gt,
        mr=mr,
    )
    return EvalResult(
        curve=curve,
        log_average_miss_rate=mr,
        recall=n_tp / n_gt,
        n_images=len(images),
        n_included_gts=n_gt,
        n_tp=n_tp,
        n_fp=sum(r.n_fp for r in results),
        per_image=dict(zip(images, results, strict=True)),
    )


def compare_nms_variants(
    raw_dets_by_image: dict[str, list[Detection]],
    gts_by_image: dict[str, list[GroundTruth]],
    nms_configs: list[NMSConfig],
    subsets: list[Subset] | None = None,
    iou_thresholds: list[float] | None = None,
    base_cfg: EvalConfig | None = None,
) -> list[ComparisonRow]:
    """
    Post-process the raw detections with each NMS config, then evaluate on
    every subset and IoU threshold. A subset without ground truth yields a
    row with empty metrics.
    """
    base_cfg = base_cfg or EvalConfig()
    subsets = subsets or [base_cfg.subset]
    iou_thresholds = iou_thresholds or [base_cfg.iou_thresh]

    rows = []
    for nms_cfg in nms_configs:
        kept = {image: postprocess(dets, nms_cfg) for image, dets in raw_dets_by_image.items()}
        for subset, iou_thresh in product(subsets, iou_thresholds):
            cfg = base_cfg.model_copy(update={"subset": Subset(subset), "iou_thresh": iou_thresh})
            try:
                result = evaluate(kept, gts_by_image, cfg)
                mr, recall = result.log_average_miss_rate, result.recall
            except NoGroundTruthError:
                mr = recall = None
            rows.append(
                ComparisonRow(
                    variant=nms_cfg.variant.value,
                    subset=Subset(subset).value,
                    iou_thresh=iou_thresh,
                    log_average_miss_rate=mr,
                    recall=recall,
                )
            )
    return rows


def compare_regression_losses(
    pred: Box, gt: Box, ref: Box | None = None, cfg: LossConfig | None = None
) -> dict[str, float]:
    return {kind: regression_loss(kind, pred, gt, ref, cfg) for kind in REGRESSION_LOSS_KINDS}
