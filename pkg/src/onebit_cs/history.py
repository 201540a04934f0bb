"""The HISTORY recovery pipeline.

Hamming proxy -> candidate support of size ~alpha*K -> least squares on the
candidate columns -> hard threshold to K (only when the candidate set is
larger than K) -> unit-norm output.

The detection stage never sees the flip ratio: the ordering of the proxy
values is the same for every rho < 0.5, so the proxy is computed as if
rho = 0.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import (
    DimensionMismatchError,
    InvalidParameterError,
    RankDeficientError,
    ZeroVectorError,
)
from .hamming import (
    CandidateSupport,
    adaptive_alpha,
    estimate_proxy,
    find_supp,
    target_support_size,
)
from .lstsq import SubmatrixView, hard_threshold, left_divide, normalize
from .signal_model import BitMeasurements, MeasurementEnsemble

__all__ = [
    "HistoryParams",
    "RecoveryResult",
    "history_recover",
    "history_recover_with_support",
    "warm_up",
]

STATUS_OK = "ok"


@dataclass(frozen=True)
class HistoryParams:
    """Sparsity plus redundancy policy.

    ``alpha=None`` selects the adaptive rule ``1 + alpha0 * exp(-tau M / N)``;
    a number fixes alpha.
    """

    k: int
    alpha: Optional[float] = None
    alpha0: float = 4.0
    tau: float = 1.0

    def __post_init__(self):
        if self.k < 1:
            raise InvalidParameterError(f"k must be >= 1, got {self.k}")
        if self.alpha is not None and not self.alpha >= 1.0:
            raise InvalidParameterError(f"fixed alpha must be >= 1, got {self.alpha}")
        if self.alpha0 < 0 or not self.tau > 0:
            raise InvalidParameterError(
                f"need alpha0 >= 0 and tau > 0, got {self.alpha0}, {self.tau}"
            )

    @property
    def adaptive(self) -> bool:
        return self.alpha is None

    def alpha_for(self, m: int, n: int) -> float:
        if self.alpha is None:
            return adaptive_alpha(m, n, self.alpha0, self.tau)
        return float(self.alpha)

    def describe(self) -> str:
        if self.alpha is None:
            return f"adaptive({self.alpha0:g},{self.tau:g})"
        return f"fixed({self.alpha:g})"


@dataclass(frozen=True)
class RecoveryResult:
    """Output of any recovery algorithm in this package.

    ``status`` is ``"ok"`` or a short failure tag; on failure ``x_star`` is
    the zero vector so that the recorded error is exactly 1.
    """

    x_star: np.ndarray
    support: np.ndarray
    coefficients: np.ndarray
    wall_time: float
    status: str = STATUS_OK
    candidate_support: Optional[CandidateSupport] = None
    alpha_used: float = float("nan")
    iterations: int = 0
    message: str = ""

    @property
    def ok(self) -> bool:
        return self.status == STATUS_OK


def _check_dims(y: BitMeasurements, a: MeasurementEnsemble):
    if len(y) != a.m:
        raise DimensionMismatchError(f"matrix has {a.m} rows but y has length {len(y)}")


def _solve_on_support(y, a, candidate: CandidateSupport, k: int, t0: float, order=None) -> RecoveryResult:
    # ``order`` fixes the column order handed to QR; ordering by proxy rank
    # (not by index) makes the output exactly permutation-equivariant.
    n = a.n
    cols = candidate.indices if order is None else order
    try:
        raw = left_divide(SubmatrixView(a, cols), y)
        # Threshold and normalize in column order too; the norm's summation
        # order would otherwise depend on where the columns sit in A.
        kept = hard_threshold(raw, k) if raw.size > k else raw
        x = np.zeros(n)
        x[cols] = normalize(kept)
        coef = np.zeros(n)
        coef[cols] = raw
        coef = coef[candidate.indices]
    except (RankDeficientError, ZeroVectorError) as exc:
        status = "rank_deficient" if isinstance(exc, RankDeficientError) else "zero_solution"
        return RecoveryResult(
            x_star=np.zeros(n),
            support=np.empty(0, np.int64),
            coefficients=np.empty(0),
            wall_time=time.perf_counter() - t0,
            status=status,
            candidate_support=candidate,
            alpha_used=candidate.alpha_used,
            message=str(exc),
        )
    return RecoveryResult(
        x_star=x,
        support=np.flatnonzero(x),
        coefficients=coef,
        wall_time=time.perf_counter() - t0,
        candidate_support=candidate,
        alpha_used=candidate.alpha_used,
    )


def history_recover(y: BitMeasurements, a: MeasurementEnsemble, params: HistoryParams) -> RecoveryResult:
    t0 = time.perf_counter()
    _check_dims(y, a)
    alpha = params.alpha_for(a.m, a.n)
    size = target_support_size(alpha, params.k, a.m, a.n)
    proxy = estimate_proxy(y, a)
    mags = np.abs(proxy.h)
    candidate = find_supp(mags, size, alpha_used=alpha)
    by_rank = candidate.indices[np.argsort(-mags[candidate.indices], kind="stable")]
    return _solve_on_support(y, a, candidate, params.k, t0, order=by_rank)


def history_recover_with_support(y: BitMeasurements, a: MeasurementEnsemble, forced_support, k: int) -> RecoveryResult:
    """Run only the least-squares / threshold / normalize stage on a given support."""
    t0 = time.perf_counter()
    _check_dims(y, a)
    idx = np.unique(np.asarray(forced_support, dtype=np.int64))
    if idx.size >= a.m:
        raise InvalidParameterError(f"need |S| < M, got |S|={idx.size}, M={a.m}")
    if not 1 <= k <= max(idx.size, 1):
        raise InvalidParameterError(f"k must be in [1, |S|], got {k}")
    candidate = CandidateSupport(idx, float("nan"), int(idx.size))
    return _solve_on_support(y, a, candidate, k, t0)


def warm_up():
    """Compile the numba kernels so later calls time only the work."""
    a = MeasurementEnsemble(np.array([[1.0, -0.5], [0.25, 2.0], [-1.0, 0.5]]))
    y = BitMeasurements(np.array([1.0, -1.0, 1.0]))
    history_recover(y, a, HistoryParams(1, alpha=2.0))
