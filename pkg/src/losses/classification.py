"""
Classification and multi-task losses

The classification loss is a focal loss extended to soft labels:

    - alpha      * sum_{label = 1}     (1 - p)^gamma * ln p
    - beta       * sum_{0 < label < 1} label^gamma   * ln p
    - (1 - alpha)* sum_{label = 0}     p^gamma       * ln(1 - p)

It returns the unnormalised sum; multitask_loss divides by the sample counts.
"""

import numpy as np

from src.assignment import AssignedSample
from src.errors import BoxkitError, DomainError
from src.schemas import LossConfig


def classification_loss(
    preds, labels, excluded=None, cfg: LossConfig | None = None
) -> float:
    """
    Args:
        preds: predicted foreground probabilities, clamped to [eps, 1 - eps]
        labels: soft labels in [0, 1]
        excluded: optional flags; excluded entries contribute nothing
        cfg: alpha, beta, gamma, eps

    Raises:
        BoxkitError: length mismatch
        DomainError: a label outside [0, 1]
    """
    cfg = cfg or LossConfig()
    p = np.asarray(preds, dtype=np.float64).ravel()
    y = np.asarray(labels, dtype=np.float64).ravel()
    skip = np.zeros(p.shape, dtype=bool) if excluded is None else np.asarray(excluded, dtype=bool).ravel()
    if not (p.shape == y.shape == skip.shape):
        raise BoxkitError(
            f"classification_loss length mismatch: preds {p.size}, labels {y.size}, excluded {skip.size}"
        )
    if y.size and (y.min() < 0.0 or y.max() > 1.0):
        raise DomainError("labels must lie in [0, 1]")

    p = np.clip(p, cfg.prob_eps, 1.0 - cfg.prob_eps)
    keep = ~skip
    pos = keep & (y >= 1.0)
    neg = keep & (y <= 0.0)
    semi = keep & (y > 0.0) & (y < 1.0)

    loss = -cfg.alpha * np.sum((1.0 - p[pos]) ** cfg.gamma * np.log(p[pos]))
    loss -= cfg.beta * np.sum(y[semi] ** cfg.gamma * np.log(p[semi]))
    loss -= (1.0 - cfg.alpha) * np.sum(p[neg] ** cfg.gamma * np.log1p(-p[neg]))
    return float(loss)


def multitask_loss(
    cls_sum: float, reg_losses, n_cls: int, n_reg: int, cfg: LossConfig | None = None
) -> float:
    """
    cls_sum / n_cls + lambda / max(n_reg, 1) * sum(reg_losses).

    reg_losses should only hold the samples with label > 0.

    Raises:
        DomainError: n_cls < 1 or n_reg < 0
    """
    cfg = cfg or LossConfig()
    if n_cls < 1:
        raise DomainError(f"n_cls must be >= 1, got {n_cls}")
    if n_reg < 0:
        raise DomainError(f"n_reg must be >= 0, got {n_reg}")
    if cfg.lambda_ == 0.0:
        return cls_sum / n_cls
    reg_sum = float(np.sum(np.asarray(reg_losses, dtype=np.float64)))
    return cls_sum / n_cls + cfg.lambda_ / max(n_reg, 1) * reg_sum


def training_loss(
    samples: list[AssignedSample], preds, reg_losses, cfg: LossConfig | None = None
) -> float:
    """
    Multi-task loss of one image from its assigned samples.

    The classification term is normalised by the positive, semi-positive and
    negative anchors (excluded ones do not count); the regression term by the
    anchors with label > 0. reg_losses is aligned with samples and entries of
    samples with label 0 are ignored.
    """
    cfg = cfg or LossConfig()
    reg_losses = np.asarray(reg_losses, dtype=np.float64).ravel()
    if reg_losses.size != len(samples):
        raise BoxkitError(
            f"reg_losses has {reg_losses.size} entries for {len(samples)} samples"
        )

    labels = np.array([s.label for s in samples], dtype=np.float64)
    excluded = np.array([s.excluded for s in samples], dtype=bool)
    cls_sum = classification_loss(preds, labels, excluded, cfg)

    regress = (labels > 0.0) & ~excluded
    n_cls = max(int(np.count_nonzero(~excluded)), 1)
    return multitask_loss(
        cls_sum, reg_losses[regress], n_cls, int(np.count_nonzero(regress)), cfg
    )
