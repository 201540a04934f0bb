"""Monte-Carlo estimators for the Hamming probability laws."""

from __future__ import annotations

import math

import numpy as np

from .errors import InvalidParameterError
from .hamming import flip_probability, lemma2_lower_bound

__all__ = [
    "LAW_CHECK_SIGNAL",
    "empirical_flip_frequencies",
    "lemma2_order_frequency",
    "verify_laws",
]

# Unit norm: 0.64 + 0.2304 + 0.1296 = 1.
LAW_CHECK_SIGNAL = np.array([0.8, -0.48, 0.0, 0.36, 0.0])


def _flipped_signs(proj, rho, rng):
    y = np.where(proj < 0, -1.0, 1.0)
    if rho > 0:
        y = np.where(rng.random(y.shape) < rho, -y, y)
    return y


def empirical_flip_frequencies(x, m: int, rho: float, rng: np.random.Generator, batch: int = 50_000) -> np.ndarray:
    """H(y, A_j) / M for a fresh Gaussian A with M rows, per coordinate j."""
    x = np.asarray(x, dtype=np.float64)
    if abs(np.linalg.norm(x) - 1.0) > 1e-12:
        raise InvalidParameterError("x must have unit norm")
    if not 0.0 <= rho < 0.5:
        raise InvalidParameterError(f"flip ratio must lie in [0, 0.5), got {rho}")
    counts = np.zeros(x.size, dtype=np.int64)
    done = 0
    while done < m:
        rows = min(batch, m - done)
        a = rng.standard_normal((rows, x.size))
        y = _flipped_signs(a @ x, rho, rng)
        counts += np.count_nonzero((a < 0) != (y < 0)[:, None], axis=0)
        done += rows
    return counts / m


def lemma2_order_frequency(x_u: float, x_v: float, m: int, rho: float, reps: int, rng: np.random.Generator) -> float:
    """Fraction of independent draws of A (M rows) with H(y, A_u) < H(y, A_v).

    The signal is (x_u, x_v, r) with r >= 0 filling the remaining unit norm.
    """
    rest = 1.0 - x_u * x_u - x_v * x_v
    if rest < 0:
        raise InvalidParameterError("x_u^2 + x_v^2 must not exceed 1")
    x = np.array([x_u, x_v, math.sqrt(rest)])
    wins = 0
    per_batch = max(1, 2_000_000 // (3 * m))
    left = reps
    while left > 0:
        b = min(per_batch, left)
        a = rng.standard_normal((b, m, 3))
        y = _flipped_signs(a @ x, rho, rng)
        mism = (a[:, :, :2] < 0) != (y < 0)[:, :, None]
        h = np.count_nonzero(mism, axis=1)
        wins += int(np.count_nonzero(h[:, 0] < h[:, 1]))
        left -= b
    return wins / reps


def verify_laws(samples: int, rng: np.random.Generator, rhos=(0.0, 0.1, 0.3), lemma2_reps: int = 2000):
    """Run the flip-law and ordering checks; returns a list of result dicts."""
    out = []
    x = LAW_CHECK_SIGNAL
    for rho in rhos:
        freq = empirical_flip_frequencies(x, samples, rho, rng)
        expected = np.asarray(flip_probability(x, rho))
        dev = np.abs(freq - expected)
        sigma = np.sqrt(expected * (1 - expected) / samples)
        out.append(
            {
                "check": "flip_law",
                "rho": rho,
                "max_deviation": float(dev.max()),
                "tolerance": float(4 * sigma.max()),
                "passed": bool(np.all(dev <= 4 * sigma + 1e-15)),
            }
        )
    m, rho, eps = 1000, 0.1, 0.3
    freq = lemma2_order_frequency(0.5, 0.2, m, rho, lemma2_reps, rng)
    bound = lemma2_lower_bound(m, rho, eps)
    out.append(
        {
            "check": "ordering_bound",
            "rho": rho,
            "frequency": freq,
            "bound": bound,
            "passed": freq >= bound,
        }
    )
    return out
