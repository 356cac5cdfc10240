"""
Gradient verification for the Center-IoU loss

run_grad_check compares grad_center_iou against central finite
differences on seeded random (pred, gt, ref) triples. Triples within a
few steps of a kink of the piecewise-smooth loss are skipped and counted.

run_descent_check minimises the loss with L-BFGS-B from perturbed starts
and reports how often the descent recovers the ground-truth box.
"""

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize

from src.schemas import LossConfig
from src.utils.structured_logging import get_logger

from .gradients import _terms, center_iou_value, center_iou_value_and_grad

logger = get_logger("gradcheck")


@dataclass
class GradCheckReport:
    trials: int
    checked: int
    skipped: int
    max_rel_error: float
    tolerance: float
    worst_case: dict = field(default_factory=dict)

    @property
    def skip_fraction(self) -> float:
        return self.skipped / self.trials if self.trials else 0.0

    @property
    def passed(self) -> bool:
        return self.checked > 0 and self.max_rel_error <= self.tolerance


@dataclass
class DescentReport:
    trials: int
    converged: int
    tolerance: float

    @property
    def rate(self) -> float:
        return self.converged / self.trials if self.trials else 0.0


def random_triple(rng: np.random.Generator, anchor_reference: bool = False):
    """A ground truth, a prediction scattered around it, and a reference box."""
    gx, gy = rng.uniform(0.0, 100.0, size=2)
    gw, gh = rng.uniform(10.0, 80.0, size=2)
    gt = np.array([gx, gy, gx + gw, gy + gh])

    pw, ph = gw * rng.uniform(0.5, 1.5), gh * rng.uniform(0.5, 1.5)
    px = gx + rng.uniform(-0.6, 0.6) * gw
    py = gy + rng.uniform(-0.6, 0.6) * gh
    pred = np.array([px, py, px + pw, py + ph])

    if anchor_reference:
        rw, rh = gw * rng.uniform(0.7, 1.3), gh * rng.uniform(0.7, 1.3)
        rx = gx + rng.uniform(-0.3, 0.3) * gw
        ry = gy + rng.uniform(-0.3, 0.3) * gh
        ref = np.array([rx, ry, rx + rw, ry + rh])
    else:
        ref = gt.copy()
    return pred, gt, ref


def near_kink(p, g, r, sigma: float, margin: float) -> bool:
    """True when a finite-difference stencil of half-width `margin` may straddle a kink."""
    if np.any(np.abs(p - g) < margin):
        return True
    _, _, w_raw, h_raw = _terms(p, g)
    if abs(w_raw) < margin or abs(h_raw) < margin:
        return True

    rw, rh = r[2] - r[0], r[3] - r[1]
    dx = ((p[0] + p[2]) - (g[0] + g[2])) / (2 * rw)
    dy = ((p[1] + p[3]) - (g[1] + g[3])) / (2 * rh)
    if abs(abs(dx) - 1.0) < margin or abs(abs(dy) - 1.0) < margin:
        return True

    cw, ch, _, _ = _terms(p, g)
    inter = max(w_raw, 0.0) * max(h_raw, 0.0)
    ratio = 1.0 - inter / (cw * ch)
    return abs(ratio - sigma) < margin


def central_difference(p, g, r, sigma: float, h: float) -> np.ndarray:
    grad = np.zeros(4)
    for k in range(4):
        step = np.zeros(4)
        step[k] = h
        grad[k] = (
            center_iou_value(p + step, g, r, sigma) - center_iou_value(p - step, g, r, sigma)
        ) / (2 * h)
    return grad


def relative_error(analytic: np.ndarray, numeric: np.ndarray, floor: float = 1e-6) -> float:
    scale = np.maximum(np.maximum(np.abs(analytic), np.abs(numeric)), floor)
    return float(np.max(np.abs(analytic - numeric) / scale))


def run_grad_check(
    trials: int = 500,
    seed: int = 0,
    sigmas: tuple[float, ...] = (0.1, 0.5, 0.9),
    h: float = 1e-5,
    tolerance: float = 1e-4,
) -> GradCheckReport:
    """Analytic vs central-difference gradients on `trials` seeded configurations."""
    rng = np.random.default_rng(seed)
    report = GradCheckReport(
        trials=trials, checked=0, skipped=0, max_rel_error=0.0, tolerance=tolerance
    )

    for i in range(trials):
        sigma = sigmas[i % len(sigmas)]
        pred, gt, ref = random_triple(rng, anchor_reference=bool(i % 2))
        if near_kink(pred, gt, ref, sigma, margin=10 * h):
            report.skipped += 1
            continue

        _, analytic = center_iou_value_and_grad(pred, gt, ref, sigma)
        numeric = central_difference(pred, gt, ref, sigma, h)
        err = relative_error(analytic, numeric)
        report.checked += 1
        if err > report.max_rel_error:
            report.max_rel_error = err
            report.worst_case = {
                "trial": i,
                "sigma": sigma,
                "pred": pred.tolist(),
                "gt": gt.tolist(),
                "ref": ref.tolist(),
            }

    logger.info(
        "grad_check_complete",
        trials=trials,
        checked=report.checked,
        skipped=report.skipped,
        max_rel_error=report.max_rel_error,
        passed=report.passed,
    )
    return report


def run_descent_check(
    trials: int = 100,
    seed: int = 0,
    cfg: LossConfig | None = None,
    perturbation: float = 0.15,
    tolerance: float = 1e-2,
) -> DescentReport:
    """
    Minimise the loss over the predicted corners from perturbed starts.

    A trial converges when every corner ends within tolerance * max(w, h)
    of the ground truth.
    """
    cfg = cfg or LossConfig()
    rng = np.random.default_rng(seed)
    converged = 0

    for _ in range(trials):
        _, gt, _ = random_triple(rng)
        size = max(gt[2] - gt[0], gt[3] - gt[1])
        start = gt + rng.normal(0.0, perturbation, size=4) * np.array(
            [gt[2] - gt[0], gt[3] - gt[1]] * 2
        )

        result = minimize(
            lambda p, g=gt: center_iou_value_and_grad(p, g, g, cfg.sigma),
            start,
            jac=True,
            method="L-BFGS-B",
            options={"maxiter": 1000, "ftol": 1e-15, "gtol": 1e-12},
        )
        if np.max(np.abs(result.x - gt)) <= tolerance * size:
            converged += 1

    logger.info("descent_check_complete", trials=trials, converged=converged)
    return DescentReport(trials=trials, converged=converged, tolerance=tolerance)
