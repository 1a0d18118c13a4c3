"""Closed-form loop estimators, their corrections, bounds and log-log fits.

The polynomial estimators only count the smallest loops and are small-p
approximations; values above 1 are clamped with a warning.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import ParameterError

P_CRITICAL = 0.5         # square-lattice bond percolation threshold
P_THRESHOLD_UPPER = 0.3  # upper estimate of the qudit code threshold

POWERLAW_COEFF = 4.745
POWERLAW_EXPONENT = 3.057


class Correction(str, Enum):
    POWERLAW = "powerlaw"
    SIXLOOP = "sixloop"


class ModelWarning(UserWarning):
    pass


@dataclass(frozen=True)
class ModelParams:
    n_h: int
    n_v: int
    p: float
    d: int = 2
    p_c: float = P_CRITICAL

    def __post_init__(self):
        _check(self.n_h, self.n_v, self.p)
        if self.d < 2:
            raise ParameterError(f"qudit dimension must be >= 2, got {self.d}")

    @property
    def above_threshold(self) -> bool:
        return self.p >= P_THRESHOLD_UPPER

    @property
    def supercritical(self) -> bool:
        return self.p >= self.p_c

    def warn(self):
        if self.supercritical:
            warnings.warn(
                f"p={self.p} is not below the percolation threshold {self.p_c}",
                ModelWarning, stacklevel=2,
            )
        elif self.above_threshold:
            warnings.warn(
                f"p={self.p} is above the estimated code threshold {P_THRESHOLD_UPPER}",
                ModelWarning, stacklevel=2,
            )


@dataclass(frozen=True)
class FitResult:
    slope: float
    intercept: float
    rss: float
    n_points: int

    @property
    def coefficient(self) -> float:
        return math.exp(self.intercept)


def _check(n_h, n_v, p):
    if n_h < 1 or n_v < 1:
        raise ParameterError(f"shape must be positive, got ({n_h}, {n_v})")
    if not 0.0 <= p <= 1.0:
        raise ParameterError(f"p must lie in [0, 1], got {p}")


def _clamp(value: float, name: str) -> float:
    if value > 1.0:
        warnings.warn(f"{name}={value:.4g} exceeds 1; clamped", ModelWarning, stacklevel=3)
        return 1.0
    return max(value, 0.0)


def boundary_term(n_h: int, n_v: int, p: float) -> float:
    """Shape-dependent part 3 (n_h + n_v) / (n_h n_v) p^2 of the loop-edge estimate."""
    _check(n_h, n_v, p)
    return 3.0 * (n_h + n_v) / (n_h * n_v) * p * p


def p_loop_edge_eq3(n_h: int, n_v: int, p: float) -> float:
    """Loop-edge fraction from three-edge boundary and four-edge bulk loops."""
    return _clamp(boundary_term(n_h, n_v, p) + 4.0 * p ** 3, "p_loop_edge")


def p_loop_edge_corrected(n_h: int, n_v: int, p: float, variant="powerlaw") -> float:
    variant = Correction(variant)
    base = boundary_term(n_h, n_v, p)
    if variant is Correction.POWERLAW:
        raw = base + POWERLAW_COEFF * p ** POWERLAW_EXPONENT
    else:
        raw = base + 4.0 * p ** 3 + 6.0 * p ** 5
    return _clamp(raw, "p_loop_edge")


def p_not_pauli_twirled(n_h: int, n_v: int, p: float) -> float:
    """Probability that some smallest loop forms on either lattice."""
    _check(n_h, n_v, p)
    raw = n_h * n_v * 2.0 * p ** 4 + (n_h + n_v) * (2.0 * p ** 3 - 3.0 * p ** 4)
    return _clamp(raw, "p_not_pauli_twirled")


def logical_error_bound(p_l: float, p_ntw: float) -> float:
    """Worst case where every sample with a loop is a logical failure."""
    for name, v in (("p_l", p_l), ("p_ntw", p_ntw)):
        if not 0.0 <= v <= 1.0:
            raise ParameterError(f"{name} must lie in [0, 1], got {v}")
    return p_l - p_ntw * p_l + p_ntw


def expected_loop_components(n_h: int, n_v: int, p: float) -> tuple[float, float]:
    _check(n_h, n_v, p)
    return 2.0 * n_h * n_v * p ** 4, 2.0 * n_h * n_v * p ** 6


def complexity_estimate(n_h: int, n_v: int, p: float, d: int) -> float:
    _check(n_h, n_v, p)
    if d < 2:
        raise ParameterError(f"qudit dimension must be >= 2, got {d}")
    return 2.0 * n_h * n_v * (p ** 4 + p ** 6) * d * d


def loglog_fit(points) -> FitResult:
    """Ordinary least squares of ln y on ln p."""
    pts = np.asarray(list(points), dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 2 or pts.shape[0] < 2:
        raise ParameterError("loglog_fit needs at least two (p, y) points")
    if np.any(pts <= 0) or not np.all(np.isfinite(pts)):
        raise ParameterError("loglog_fit needs finite, strictly positive p and y")
    x, y = np.log(pts[:, 0]), np.log(pts[:, 1])
    if np.ptp(x) == 0:
        raise ParameterError("loglog_fit needs at least two distinct p values")
    design = np.column_stack([x, np.ones_like(x)])
    (slope, intercept), *_ = np.linalg.lstsq(design, y, rcond=None)
    resid = y - (slope * x + intercept)
    return FitResult(float(slope), float(intercept), float(resid @ resid), len(pts))
