"""Householder QR least squares and the sparse post-processing operators."""

from __future__ import annotations

from dataclasses import dataclass

import numba
import numpy as np

from .errors import (
    DimensionMismatchError,
    InvalidParameterError,
    RankDeficientError,
    ZeroVectorError,
)
from .signal_model import BitMeasurements, MeasurementEnsemble

__all__ = [
    "RANK_TOL",
    "SubmatrixView",
    "QrFactorization",
    "householder_qr",
    "left_divide",
    "top_indices",
    "hard_threshold",
    "normalize",
]

RANK_TOL = 1e-10


@dataclass(frozen=True)
class SubmatrixView:
    """Columns ``columns`` of ``source``, in the order given."""

    source: MeasurementEnsemble
    columns: np.ndarray

    def __post_init__(self):
        cols = np.asarray(self.columns, dtype=np.int64).ravel()
        if cols.size == 0:
            raise InvalidParameterError("submatrix needs at least one column")
        if cols.min() < 0 or cols.max() >= self.source.n:
            raise InvalidParameterError("column index out of range")
        if cols.size >= self.source.m:
            raise InvalidParameterError(
                f"need |S| < M for an overdetermined system, got |S|={cols.size}, M={self.source.m}"
            )
        object.__setattr__(self, "columns", cols)

    @property
    def shape(self):
        return (self.source.m, self.columns.size)

    def to_array(self) -> np.ndarray:
        return self.source.entries[:, self.columns]


@dataclass(frozen=True)
class QrFactorization:
    """Compact Householder QR of an m x n matrix (m > n).

    ``reflectors[:, k]`` holds the unit Householder vector for step k in rows
    k..m-1 (zeros above), so Q = H_0 H_1 ... H_{n-1} with H_k = I - 2 v v^T.
    """

    reflectors: np.ndarray
    r: np.ndarray

    def apply_qt(self, b) -> np.ndarray:
        out = np.array(b, dtype=np.float64, copy=True)
        for k in range(self.r.shape[0]):
            v = self.reflectors[k:, k]
            out[k:] -= 2.0 * v * (v @ out[k:])
        return out

    def q(self) -> np.ndarray:
        """Thin Q (m x n), formed explicitly. Only meant for checks."""
        m, n = self.reflectors.shape
        q = np.eye(m, n)
        for k in range(n - 1, -1, -1):
            v = self.reflectors[k:, k]
            q[k:] -= 2.0 * np.outer(v, v @ q[k:])
        return q


@numba.njit(cache=True, nogil=True, fastmath=True)
def _householder_columns(rt, refl, n):
    # rt holds the matrix transposed (row c = column c) so every reflection
    # works on contiguous memory. The first n rows are factored and end up
    # holding R^T in their leading n entries; any further rows (right-hand
    # sides) are only transformed, leaving Q^T b in place.
    rows, m = rt.shape
    for k in range(n):
        alpha = 0.0
        for i in range(k, m):
            alpha += rt[k, i] * rt[k, i]
        alpha = np.sqrt(alpha)
        x0 = rt[k, k]
        v0 = x0 + alpha if x0 >= 0.0 else x0 - alpha
        vnorm2 = v0 * v0 - x0 * x0 + alpha * alpha
        if vnorm2 <= 0.0:
            continue
        scale = 1.0 / np.sqrt(vnorm2)
        refl[k, k] = v0 * scale
        for i in range(k + 1, m):
            refl[k, i] = rt[k, i] * scale
        for c in range(k, rows):
            w = 0.0
            for i in range(k, m):
                w += refl[k, i] * rt[c, i]
            w *= 2.0
            for i in range(k, m):
                rt[c, i] -= w * refl[k, i]


def householder_qr(a) -> QrFactorization:
    """Unpivoted Householder QR of an m x n matrix with m >= n."""
    a = np.asarray(a, dtype=np.float64)
    if a.ndim != 2:
        raise DimensionMismatchError("expected a 2-d matrix")
    m, n = a.shape
    if n > m:
        raise InvalidParameterError(f"need m >= n, got shape {a.shape}")
    rt = np.ascontiguousarray(a.T).copy()
    refl = np.zeros((n, m))
    _householder_columns(rt, refl, n)
    return QrFactorization(refl.T, np.triu(rt[:, :n].T))


def left_divide(a_s, y) -> np.ndarray:
    """Least-squares solution of A_S c = y via unpivoted Householder QR.

    ``a_s`` may be a :class:`SubmatrixView` or a plain 2-d array.
    Raises :class:`RankDeficientError` when some |R_kk| drops below
    ``RANK_TOL`` times the largest diagonal magnitude.
    """
    mat = a_s.to_array() if isinstance(a_s, SubmatrixView) else np.asarray(a_s, dtype=np.float64)
    rhs = y.bits if isinstance(y, BitMeasurements) else np.asarray(y, dtype=np.float64)
    if mat.ndim != 2 or rhs.shape != (mat.shape[0],):
        raise DimensionMismatchError(f"matrix shape {mat.shape} incompatible with rhs {rhs.shape}")
    m, n = mat.shape
    if n >= m:
        raise InvalidParameterError(f"need fewer columns than rows, got shape {mat.shape}")
    aug = np.empty((n + 1, m))
    aug[:n] = mat.T
    aug[n] = rhs
    refl = np.zeros((n, m))
    _householder_columns(aug, refl, n)
    r = np.triu(aug[:, :n][:n].T)
    diag = np.abs(np.diag(r))
    scale = diag.max()
    bad = np.flatnonzero(diag <= RANK_TOL * scale) if scale > 0 else np.arange(n)
    if bad.size:
        raise RankDeficientError(
            f"{bad.size} of {n} columns are numerically dependent", dependent_columns=bad
        )
    return _back_substitute(r, aug[n, :n].copy())


@numba.njit(cache=True, nogil=True)
def _back_substitute(r, b):
    n = b.size
    c = np.zeros(n)
    for i in range(n - 1, -1, -1):
        acc = b[i]
        for j in range(i + 1, n):
            acc -= r[i, j] * c[j]
        c[i] = acc / r[i, i]
    return c


def top_indices(magnitudes, count: int) -> np.ndarray:
    """Sorted indices of the ``count`` largest values; ties go to the lower index."""
    order = np.argsort(-np.asarray(magnitudes, dtype=np.float64), kind="stable")
    return np.sort(order[:count])


def hard_threshold(v, k: int) -> np.ndarray:
    """Keep the k largest-magnitude entries of v and zero the rest."""
    v = np.asarray(v, dtype=np.float64)
    if not 1 <= k <= v.size:
        raise InvalidParameterError(f"k must be in [1, {v.size}], got {k}")
    out = np.zeros_like(v)
    keep = top_indices(np.abs(v), k)
    out[keep] = v[keep]
    return out


def normalize(v) -> np.ndarray:
    v = np.asarray(v, dtype=np.float64)
    norm = np.linalg.norm(v)
    if not norm > 0:
        raise ZeroVectorError("cannot normalize a zero vector")
    return v / norm
