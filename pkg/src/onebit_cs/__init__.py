"""Sparse recovery from sign-flipped 1-bit measurements.

HISTORY (Hamming support detection + coefficient recovery) together with the
BIHT-l2 and passive baselines and a seeded benchmark harness.
"""

__version__ = "0.1.0"

from .baselines import BihtParams, PassiveParams, biht_l2_recover, passive_recover
from .errors import (
    DimensionMismatchError,
    EmptySupportError,
    InvalidDimensionError,
    InvalidParameterError,
    OneBitCSError,
    RankDeficientError,
    ZeroVectorError,
)
from .hamming import (
    adaptive_alpha,
    app_probability,
    estimate_proxy,
    expected_hamming,
    find_supp,
    flip_probability,
    hamming_distance,
    lemma2_lower_bound,
)
from .history import HistoryParams, RecoveryResult, history_recover, history_recover_with_support
from .lstsq import hard_threshold, left_divide, normalize
from .signal_model import (
    BitMeasurements,
    MeasurementEnsemble,
    SparseSignal,
    apply_sign_flips,
    derive_seed,
    gen_measurement_matrix,
    gen_sparse_signal,
    make_rng,
    measure,
    recovery_error,
    support_detection_accuracy,
)

__all__ = [
    "__version__",
    "BihtParams",
    "PassiveParams",
    "biht_l2_recover",
    "passive_recover",
    "DimensionMismatchError",
    "EmptySupportError",
    "InvalidDimensionError",
    "InvalidParameterError",
    "OneBitCSError",
    "RankDeficientError",
    "ZeroVectorError",
    "adaptive_alpha",
    "app_probability",
    "estimate_proxy",
    "expected_hamming",
    "find_supp",
    "flip_probability",
    "hamming_distance",
    "lemma2_lower_bound",
    "HistoryParams",
    "RecoveryResult",
    "history_recover",
    "history_recover_with_support",
    "hard_threshold",
    "left_divide",
    "normalize",
    "BitMeasurements",
    "MeasurementEnsemble",
    "SparseSignal",
    "apply_sign_flips",
    "derive_seed",
    "gen_measurement_matrix",
    "gen_sparse_signal",
    "make_rng",
    "measure",
    "recovery_error",
    "support_detection_accuracy",
]
