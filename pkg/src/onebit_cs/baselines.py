"""Comparator algorithms: BIHT-l2 and the passive closed-form estimator.

BIHT-l2 (Jacques et al., "Robust 1-bit compressive sensing via binary
stable embeddings of sparse vectors") minimises the one-sided quadratic
penalty J(x) = ||min(y * (Phi x), 0)||^2 / 2 by projected gradient steps
followed by hard thresholding. We run it on Phi = A / sqrt(M), i.e. the
gradient of the raw-matrix penalty is scaled by 1/M, and project every
iterate onto the unit sphere; the penalty is 2-homogeneous so without the
projection the iterates shrink to the trivial minimiser 0.

Passive (Zhang, Yi and Jin, "Efficient algorithms for robust one-bit
compressive sensing"): soft-threshold A^T y / M at gamma, keep the K
largest entries, normalise.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import DimensionMismatchError, InvalidParameterError
from .history import RecoveryResult
from .lstsq import hard_threshold
from .signal_model import BitMeasurements, MeasurementEnsemble

__all__ = [
    "BihtParams",
    "PassiveParams",
    "biht_objective",
    "biht_l2_recover",
    "passive_gamma",
    "passive_recover",
]


@dataclass(frozen=True)
class BihtParams:
    k: int
    max_iters: int = 200
    step_size: float = 1.0
    early_stop: bool = True

    def __post_init__(self):
        if self.k < 1:
            raise InvalidParameterError(f"k must be >= 1, got {self.k}")
        if self.max_iters < 1:
            raise InvalidParameterError(f"max_iters must be >= 1, got {self.max_iters}")
        if not self.step_size > 0:
            raise InvalidParameterError(f"step_size must be positive, got {self.step_size}")


@dataclass(frozen=True)
class PassiveParams:
    k: int
    gamma: Optional[float] = None  # None -> sqrt(log N / M)

    def __post_init__(self):
        if self.k < 1:
            raise InvalidParameterError(f"k must be >= 1, got {self.k}")
        if self.gamma is not None and not self.gamma > 0:
            raise InvalidParameterError(f"gamma must be positive, got {self.gamma}")


def passive_gamma(m: int, n: int) -> float:
    return math.sqrt(math.log(n) / m)


def _check(y, a):
    if len(y) != a.m:
        raise DimensionMismatchError(f"matrix has {a.m} rows but y has length {len(y)}")


def biht_objective(y: BitMeasurements, a: MeasurementEnsemble, x) -> float:
    """One-sided l2 sign-consistency penalty ||min(y * A x, 0)||^2 / M."""
    margin = y.bits * (a.entries @ np.asarray(x, dtype=np.float64))
    neg = np.minimum(margin, 0.0)
    return float(neg @ neg) / a.m


def _unit(v):
    norm = np.linalg.norm(v)
    return v / norm if norm > 0 else v


def biht_l2_recover(y: BitMeasurements, a: MeasurementEnsemble, params: BihtParams) -> RecoveryResult:
    """Projected one-sided l2 BIHT.

    Starts from the normalised, K-thresholded back-projection H_K(A^T y).
    Each step ``x <- unit(H_K(x - tau/M * A^T (y * min(y * A x, 0))))``.
    With ``early_stop`` the loop ends at the first step that fails to lower
    the penalty; the best iterate seen is returned either way.
    """
    t0 = time.perf_counter()
    _check(y, a)
    if params.k > a.n:
        raise InvalidParameterError(f"k={params.k} exceeds N={a.n}")
    A = a.entries
    yb = y.bits
    m = a.m

    x = _unit(hard_threshold(A.T @ yb, params.k))
    margin = yb * (A @ x)
    neg = np.minimum(margin, 0.0)
    best_obj = float(neg @ neg) / m
    best = x
    iters = 0
    for _ in range(params.max_iters):
        grad = A.T @ (yb * neg) / m
        x = _unit(hard_threshold(x - params.step_size * grad, params.k))
        iters += 1
        margin = yb * (A @ x)
        neg = np.minimum(margin, 0.0)
        obj = float(neg @ neg) / m
        if obj < best_obj:
            best_obj, best = obj, x
        elif params.early_stop:
            break

    status = "ok" if np.any(best) else "zero_solution"
    return RecoveryResult(
        x_star=best,
        support=np.flatnonzero(best),
        coefficients=best[np.flatnonzero(best)],
        wall_time=time.perf_counter() - t0,
        status=status,
        iterations=iters,
    )


def passive_recover(y: BitMeasurements, a: MeasurementEnsemble, params: PassiveParams) -> RecoveryResult:
    t0 = time.perf_counter()
    _check(y, a)
    if params.k > a.n:
        raise InvalidParameterError(f"k={params.k} exceeds N={a.n}")
    gamma = params.gamma if params.gamma is not None else passive_gamma(a.m, a.n)
    score = a.entries.T @ y.bits / a.m
    shrunk = np.sign(score) * np.maximum(np.abs(score) - gamma, 0.0)
    if not np.any(shrunk):
        return RecoveryResult(
            x_star=np.zeros(a.n),
            support=np.empty(0, np.int64),
            coefficients=np.empty(0),
            wall_time=time.perf_counter() - t0,
            status="zero_solution",
            message=f"gamma={gamma} exceeds every |score|",
        )
    x = hard_threshold(shrunk, params.k)
    x /= np.linalg.norm(x)
    support = np.flatnonzero(x)
    return RecoveryResult(
        x_star=x,
        support=support,
        coefficients=x[support],
        wall_time=time.perf_counter() - t0,
    )
