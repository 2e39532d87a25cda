"""
Regression Module

Weighted least-squares fits of log-estimates against log horizons.

Models:
    power       log y = b + s log n
    power-log   log y = b + s log(n log n)
    power+log   log y = b + s log n + c log log n

Weights are the inverse variances of log y, (estimate / stderr)^2; points
without a standard error get unit weight.

Note:
    This module is an integral part of the nilwalk toolkit.
"""

import logging
from dataclasses import dataclass

import numpy as np
from scipy import stats

from ..errors import InvalidArgumentError

logger = logging.getLogger(__name__)

MODELS = ("power", "power-log", "power+log")
CONFIDENCE = 0.95


@dataclass(frozen=True)
class RegressionResult:
    """
    Attributes:
        model (str): One of MODELS.
        slope (float): Coefficient of log n, or of log(n log n) for power-log.
        intercept (float): Constant term.
        residuals (tuple): log y minus the fitted values.
        log_coefficient (float): Coefficient of log log n (power+log only).
        half_width (float): Confidence half-width of the slope.
        weighted_rss (float): Weighted residual sum of squares.
    """

    model: str
    slope: float
    intercept: float
    residuals: tuple
    log_coefficient: float
    half_width: float
    weighted_rss: float

    def covers(self, expected, tolerance):
        return abs(self.slope - expected) <= tolerance

    def to_json(self):
        return {
            "model": self.model,
            "slope": self.slope,
            "intercept": self.intercept,
            "log_coefficient": self.log_coefficient,
            "half_width": self.half_width,
            "weighted_rss": self.weighted_rss,
            "residuals": list(self.residuals),
        }


def _design(n, model):
    ones = np.ones_like(n)
    if model == "power":
        return np.column_stack([ones, np.log(n)])
    if model == "power-log":
        return np.column_stack([ones, np.log(n * np.log(n))])
    return np.column_stack([ones, np.log(n), np.log(np.log(n))])


def fit_exponent(points, model="power"):
    """Fits (n, estimate, stderr) points; at least four are needed."""
    if model not in MODELS:
        raise InvalidArgumentError("Unknown regression model: " + str(model))
    points = list(points)
    if len(points) < 4:
        raise InvalidArgumentError("At least 4 points are needed, got " + str(len(points)))
    n = np.array([float(p[0]) for p in points])
    y = np.array([float(p[1]) for p in points])
    if np.any(y <= 0):
        raise InvalidArgumentError("Estimates must be positive to take logarithms")
    if model != "power" and np.any(n <= np.e):
        raise InvalidArgumentError("Logarithmic models need horizons above e")
    errors = np.array([float(p[2]) if len(p) > 2 and p[2] else 0.0 for p in points])
    weights = np.where(errors > 0, (y / np.where(errors > 0, errors, 1.0)) ** 2, 1.0)

    x = _design(n, model)
    root = np.sqrt(weights)
    coefficients, *_ = np.linalg.lstsq(x * root[:, None], np.log(y) * root, rcond=None)
    residuals = np.log(y) - x @ coefficients
    weighted_rss = float(np.sum(weights * residuals ** 2))
    dof = len(points) - x.shape[1]
    scale = weighted_rss / dof if dof > 0 else 0.0
    covariance = scale * np.linalg.inv(x.T @ (x * weights[:, None]))
    half_width = float(stats.t.ppf(0.5 + CONFIDENCE / 2, dof) * np.sqrt(max(covariance[1, 1], 0.0)))
    result = RegressionResult(
        model,
        float(coefficients[1]),
        float(coefficients[0]),
        tuple(float(r) for r in residuals),
        float(coefficients[2]) if model == "power+log" else 0.0,
        half_width,
        weighted_rss,
    )
    logger.debug("%s fit: slope %.4f +- %.4f", model, result.slope, result.half_width)
    return result


def compare_models(points, models=("power", "power-log")):
    """Fits every model on the same points; the best one has the smallest weighted RSS."""
    results = {model: fit_exponent(points, model) for model in models}
    best = min(results, key=lambda model: results[model].weighted_rss)
    return results, best


__all__ = [
    "MODELS",
    "RegressionResult",
    "fit_exponent",
    "compare_models",
]
