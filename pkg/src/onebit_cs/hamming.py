"""Hamming support detection.

Probability laws relating the sign-disagreement rate between the bit vector
and a matrix column to the corresponding signal coefficient, plus the
detection stage that turns column Hamming distances into a candidate
support.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numba
import numpy as np

from .errors import DimensionMismatchError, InvalidParameterError
from .lstsq import top_indices
from .signal_model import BitMeasurements, MeasurementEnsemble

__all__ = [
    "FlipProbabilityVector",
    "ProxyVector",
    "CandidateSupport",
    "Lemma2Constants",
    "app_probability",
    "flip_probability",
    "expected_hamming",
    "lemma2_constants",
    "lemma2_lower_bound",
    "hamming_distance",
    "column_hamming_distances",
    "estimate_proxy",
    "adaptive_alpha",
    "target_support_size",
    "find_supp",
]


@dataclass(frozen=True)
class FlipProbabilityVector:
    p: np.ndarray
    m: int


@dataclass(frozen=True)
class ProxyVector:
    h: np.ndarray
    flip: FlipProbabilityVector


@dataclass(frozen=True)
class CandidateSupport:
    indices: np.ndarray
    alpha_used: float
    target_size: int


@dataclass(frozen=True)
class Lemma2Constants:
    c1: float
    c2: float


def _check_coef(x_j):
    x = np.asarray(x_j, dtype=np.float64)
    if np.any(~(np.abs(x) <= 1.0)):
        raise InvalidParameterError("coefficient must lie in [-1, 1]")
    return x


def _check_rho(rho):
    if not 0.0 <= rho < 0.5:
        raise InvalidParameterError(f"flip ratio must lie in [0, 0.5), got {rho}")


def _maybe_scalar(v):
    return float(v) if np.ndim(v) == 0 else v


def app_probability(x_j):
    """P(sign(x.phi) != sign(phi_j)) = arccos(x_j) / pi for Gaussian phi."""
    return _maybe_scalar(np.arccos(_check_coef(x_j)) / np.pi)


def flip_probability(x_j, rho: float):
    """Disagreement probability when measurements are flipped with ratio rho."""
    _check_rho(rho)
    x = _check_coef(x_j)
    return _maybe_scalar((1.0 - 2.0 * rho) / np.pi * np.arccos(x) + rho)


def expected_hamming(x_j, rho: float, m: int):
    """Mean of the Binomial(m, P_j) column Hamming distance."""
    if m < 1:
        raise InvalidParameterError(f"m must be >= 1, got {m}")
    return _maybe_scalar(m * np.asarray(flip_probability(x_j, rho)))


def lemma2_constants(m: int, rho: float) -> Lemma2Constants:
    if m < 1:
        raise InvalidParameterError(f"m must be >= 1, got {m}")
    _check_rho(rho)
    return Lemma2Constants(1.0 / (4.0 * m), math.pi**2 / (4.0 * m * (1.0 - 2.0 * rho) ** 2))


def lemma2_lower_bound(m: int, rho: float, eps: float) -> float:
    """Lower bound on P(H_u < H_v) whenever x_u - x_v > eps.

    Returned unclipped: values <= 0 mean the bound says nothing.
    """
    if not eps > 0:
        raise InvalidParameterError(f"eps must be positive, got {eps}")
    c = lemma2_constants(m, rho)
    return 1.0 + c.c1 - c.c2 / eps**2


@numba.njit(cache=True, nogil=True)
def _column_mismatches(a, y):
    m, n = a.shape
    out = np.zeros(n, np.int64)
    for i in range(m):
        yneg = y[i] < 0.0
        row = a[i]
        for j in range(n):
            out[j] += (row[j] < 0.0) != yneg
    return out


def _bits_of(y):
    return y.bits if isinstance(y, BitMeasurements) else np.asarray(y, dtype=np.float64)


def hamming_distance(y, column) -> int:
    """Count of positions where y_i differs from sign(column_i), sign(0) = +1."""
    yb = _bits_of(y)
    col = np.asarray(column, dtype=np.float64)
    if yb.shape != col.shape:
        raise DimensionMismatchError(f"lengths differ: {yb.shape} vs {col.shape}")
    return int(np.count_nonzero((col < 0) != (yb < 0)))


def column_hamming_distances(y, a: MeasurementEnsemble) -> np.ndarray:
    """Hamming distance between y and the sign pattern of every column of A.

    One pass over the rows of A; each column's count is an exact integer so
    the result does not depend on traversal order.
    """
    yb = _bits_of(y)
    if yb.shape != (a.m,):
        raise DimensionMismatchError(f"matrix has {a.m} rows, y has shape {yb.shape}")
    return _column_mismatches(a.entries, np.ascontiguousarray(yb))


def estimate_proxy(y, a: MeasurementEnsemble) -> ProxyVector:
    """h_j = cos(pi * H(y, A_j) / M) for every column j."""
    p = column_hamming_distances(y, a) / a.m
    return ProxyVector(np.cos(np.pi * p), FlipProbabilityVector(p, a.m))


def adaptive_alpha(m: int, n: int, alpha0: float = 4.0, tau: float = 1.0) -> float:
    """Redundancy factor 1 + alpha0 * exp(-tau * m / n)."""
    if m < 1 or n < 1:
        raise InvalidParameterError(f"need m, n >= 1, got m={m}, n={n}")
    if alpha0 < 0 or not tau > 0:
        raise InvalidParameterError(f"need alpha0 >= 0 and tau > 0, got {alpha0}, {tau}")
    return 1.0 + alpha0 * math.exp(-tau * m / n)


def target_support_size(alpha: float, k: int, m: int, n: int) -> int:
    """round(alpha * k) half-up, clamped to [k, min(n, m - 1)]."""
    upper = min(n, m - 1)
    if k < 1 or k > upper:
        raise InvalidParameterError(
            f"sparsity {k} must satisfy 1 <= k <= min(N, M - 1) = {upper}"
        )
    size = int(math.floor(alpha * k + 0.5))
    return max(k, min(size, upper))


def find_supp(magnitudes, l: int, alpha_used: float = float("nan")) -> CandidateSupport:
    mags = np.asarray(magnitudes, dtype=np.float64)
    if mags.ndim != 1:
        raise DimensionMismatchError("magnitudes must be a 1-d vector")
    if not 1 <= l <= mags.size:
        raise InvalidParameterError(f"target size must be in [1, {mags.size}], got {l}")
    return CandidateSupport(top_indices(mags, l), alpha_used, int(l))
