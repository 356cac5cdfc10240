"""
Regression losses (smooth-L1, IoU, GIoU, DIoU, Center-IoU) with the analytic
Center-IoU gradient, the soft-label focal classification loss and the
multi-task combination.
"""

from src.schemas import LossConfig

from .classification import classification_loss, multitask_loss, training_loss
from .gradcheck import DescentReport, GradCheckReport, run_descent_check, run_grad_check
from .gradients import center_iou_value_and_grad, grad_center_iou
from .regression import (
    REGRESSION_LOSS_KINDS,
    center_iou_loss,
    center_offsets,
    diou_loss,
    enclosing_minus_intersection_ratio,
    giou_loss,
    iou_loss,
    regression_loss,
    smooth_l1,
    smooth_ln,
    smooth_ln_grad,
)

__all__ = [
    "REGRESSION_LOSS_KINDS",
    "DescentReport",
    "GradCheckReport",
    "LossConfig",
    "center_iou_loss",
    "center_iou_value_and_grad",
    "center_offsets",
    "classification_loss",
    "diou_loss",
    "enclosing_minus_intersection_ratio",
    "giou_loss",
    "grad_center_iou",
    "iou_loss",
    "multitask_loss",
    "regression_loss",
    "run_descent_check",
    "run_grad_check",
    "smooth_l1",
    "smooth_ln",
    "smooth_ln_grad",
    "training_loss",
]
