"""Bell-violation reports and sampling-error scaling fits."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .estimators import MomentEstimate, v_from_A
from .model import reference_values

GENUINE_THRESHOLD = 1.0 / math.sqrt(2.0)


@dataclass(frozen=True)
class BellReport:
    M: int
    v_hat: float
    v_se: float
    mabk_bound: float
    qm_v: float
    svetlichny_bound: float
    sigma_mabk: float
    sigma_svetlichny: float | None  # even M only
    genuine: bool | None  # even M only
    relative_error: float


@dataclass(frozen=True)
class ScalingFit:
    points: tuple
    slope: float
    intercept: float
    residual: float


def bell_report(est: MomentEstimate, M: int) -> BellReport:
    """Compare a V estimate against the MABK and Svetlichny bounds."""
    ref = reference_values(M)
    v_hat, v_se = v_from_A(est, M)

    def sigmas(excess):
        if v_se > 0.0:
            return excess / v_se
        return math.copysign(math.inf, excess) if excess != 0.0 else 0.0

    even = M % 2 == 0
    return BellReport(
        M=M,
        v_hat=v_hat,
        v_se=v_se,
        mabk_bound=ref.mabk_bound,
        qm_v=ref.qm_V,
        svetlichny_bound=ref.svetlichny_bound,
        sigma_mabk=sigmas(v_hat - ref.mabk_bound),
        sigma_svetlichny=sigmas(v_hat - ref.svetlichny_bound) if even else None,
        genuine=(v_hat / ref.qm_V > GENUINE_THRESHOLD) if even else None,
        relative_error=v_se / ref.qm_V,
    )


def fit_error_exponent(points) -> ScalingFit:
    """Least-squares exponent of relative error vs qubit count.

    Fits log2(relative_error) = slope * M + intercept; an error growing as
    2^{M/3} fits slope 1/3 exactly.
    """
    points = [(int(m), float(e)) for m, e in points]
    if len(points) < 4:
        raise ValueError(f"need at least 4 points, got {len(points)}")
    if any(e <= 0.0 for _, e in points):
        raise ValueError("relative errors must be positive")
    ms = np.array([m for m, _ in points], dtype=float)
    logs = np.log2([e for _, e in points])
    slope, intercept = np.polyfit(ms, logs, 1)
    residual = float(np.sum((logs - (slope * ms + intercept)) ** 2))
    return ScalingFit(tuple(points), float(slope), float(intercept), residual)
