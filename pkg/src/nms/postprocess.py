"""Per-image detection post-processing: confidence filter, top-k, NMS, top-k."""

from src.schemas import NMSConfig
from src.utils.structured_logging import get_logger

from .base import Detection, rank_order
from .registry import build_variant

logger = get_logger("nms.postprocess")


def run_nms(dets: list[Detection], cfg: NMSConfig | None = None) -> list[Detection]:
    """Apply the configured variant alone, without filtering or truncation."""
    return build_variant(cfg or NMSConfig()).run(dets)


def postprocess(dets: list[Detection], cfg: NMSConfig | None = None) -> list[Detection]:
    """
    Keep detections with score >= conf_thresh, the top pre_top_k of those,
    run the variant, and return the top final_top_k by rescored value.

    Detections rescored to 0 stay in the output if they fit in final_top_k.
    """
    cfg = cfg or NMSConfig()
    candidates = [d for d in dets if d.score >= cfg.conf_thresh]
    candidates = rank_order(candidates)[: cfg.pre_top_k]
    result = build_variant(cfg).run(candidates)[: cfg.final_top_k]
    logger.debug(
        "postprocess_complete",
        variant=cfg.variant.value,
        received=len(dets),
        candidates=len(candidates),
        returned=len(result),
    )
    return result
