"""Signals, Gaussian measurement ensembles, 1-bit measurements and metrics.

Random streams come from numpy's ``PCG64`` bit generator; normals are drawn
with numpy's ziggurat sampler (``Generator.standard_normal``). Given the same
seed and numpy major version, every generator below is bit-reproducible.

Matrices are stored dense, C-contiguous (row-major). Row products (``A @ x``)
are contiguous; column statistics are computed by streaming rows.
"""

from __future__ import annotations

import hashlib
import struct
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DimensionMismatchError,
    EmptySupportError,
    InvalidDimensionError,
    InvalidParameterError,
)

__all__ = [
    "RNG_NAME",
    "SparseSignal",
    "MeasurementEnsemble",
    "BitMeasurements",
    "make_rng",
    "derive_seed",
    "sign",
    "gen_sparse_signal",
    "gen_measurement_matrix",
    "measure",
    "apply_sign_flips",
    "recovery_error",
    "support_detection_accuracy",
]

RNG_NAME = "numpy.PCG64/ziggurat-v1"

_NORM_TOL = 1e-12


def _frozen(a, dtype=np.float64):
    arr = np.array(a, dtype=dtype, copy=True)
    arr.setflags(write=False)
    return arr


def make_rng(seed: int) -> np.random.Generator:
    """Deterministic generator for a 64-bit seed."""
    return np.random.Generator(np.random.PCG64(int(seed) & 0xFFFFFFFFFFFFFFFF))


def derive_seed(base_seed: int, *keys) -> int:
    """Stable 64-bit child seed from a base seed and any reprs-able keys.

    The derivation is ``blake2b(digest_size=8)`` over the little-endian base
    seed followed by ``repr(key)`` of each key joined with ``"|"``; the digest
    is read as a little-endian unsigned integer. External tools can
    regenerate a single trial from the values recorded in a CSV row.
    """
    h = hashlib.blake2b(digest_size=8)
    h.update(struct.pack("<Q", int(base_seed) & 0xFFFFFFFFFFFFFFFF))
    for key in keys:
        h.update(b"|")
        h.update(repr(key).encode("utf-8"))
    return int.from_bytes(h.digest(), "little")


def sign(v):
    """Elementwise sign with the convention sign(0) = +1."""
    return np.where(np.asarray(v) < 0, -1.0, 1.0)


@dataclass(frozen=True)
class SparseSignal:
    """Exactly K-sparse vector with unit 2-norm."""

    values: np.ndarray
    support: np.ndarray = field(default=None)

    def __post_init__(self):
        values = _frozen(self.values)
        if values.ndim != 1 or values.size == 0:
            raise InvalidDimensionError("signal values must be a non-empty 1-d vector")
        nz = np.flatnonzero(values)
        if nz.size == 0:
            raise EmptySupportError("signal has no nonzero entries")
        if abs(np.linalg.norm(values) - 1.0) > _NORM_TOL:
            raise InvalidParameterError(
                f"signal must have unit 2-norm, got {np.linalg.norm(values)!r}"
            )
        if self.support is not None:
            given = np.sort(np.asarray(self.support, dtype=np.int64))
            if not np.array_equal(given, nz):
                raise InvalidParameterError("support does not match nonzero entries")
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "support", _frozen(nz, np.int64))

    @property
    def n(self) -> int:
        return self.values.size

    @property
    def k(self) -> int:
        return self.support.size


@dataclass(frozen=True)
class MeasurementEnsemble:
    """Dense M x N real measurement matrix."""

    entries: np.ndarray

    def __post_init__(self):
        a = np.ascontiguousarray(self.entries, dtype=np.float64)
        if a.ndim != 2 or a.shape[0] < 1 or a.shape[1] < 1:
            raise InvalidDimensionError(f"matrix must be 2-d with M, N >= 1, got shape {a.shape}")
        if not np.all(np.isfinite(a)):
            raise InvalidParameterError("matrix entries must be finite")
        if a is self.entries:
            a = a.copy()
        a.setflags(write=False)
        object.__setattr__(self, "entries", a)

    @property
    def m(self) -> int:
        return self.entries.shape[0]

    @property
    def n(self) -> int:
        return self.entries.shape[1]

    def column(self, j: int) -> np.ndarray:
        return self.entries[:, j]


@dataclass(frozen=True)
class BitMeasurements:
    """Vector over {-1, +1}, optionally produced with sign-flip ratio ``flip_ratio``."""

    bits: np.ndarray
    flip_ratio: float = 0.0

    def __post_init__(self):
        b = _frozen(self.bits)
        if b.ndim != 1 or b.size == 0:
            raise InvalidDimensionError("bits must be a non-empty 1-d vector")
        if not np.all((b == 1.0) | (b == -1.0)):
            raise InvalidParameterError("every bit must be exactly -1 or +1")
        object.__setattr__(self, "bits", b)

    def __len__(self):
        return self.bits.size


def gen_sparse_signal(n: int, k: int, rng: np.random.Generator) -> SparseSignal:
    """Random support of size k, standard normal values, unit norm."""
    if n < 1 or k < 1 or k > n:
        raise InvalidDimensionError(f"need 1 <= k <= n, got n={n}, k={k}")
    for _ in range(2):
        support = np.sort(rng.choice(n, size=k, replace=False))
        values = np.zeros(n)
        values[support] = rng.standard_normal(k)
        norm = np.linalg.norm(values)
        if norm > 0:
            values /= norm
            if np.count_nonzero(values) == k:
                return SparseSignal(values, support)
    raise InvalidParameterError("could not draw an exactly k-sparse signal")


def gen_measurement_matrix(m: int, n: int, rng: np.random.Generator) -> MeasurementEnsemble:
    if m < 1 or n < 1:
        raise InvalidDimensionError(f"need m, n >= 1, got m={m}, n={n}")
    return MeasurementEnsemble(rng.standard_normal((m, n)))


def measure(a: MeasurementEnsemble, x) -> BitMeasurements:
    """Clean 1-bit measurements sign(A x)."""
    values = x.values if isinstance(x, SparseSignal) else np.asarray(x, dtype=np.float64)
    if values.shape != (a.n,):
        raise DimensionMismatchError(f"matrix has {a.n} columns, signal has shape {values.shape}")
    return BitMeasurements(sign(a.entries @ values), 0.0)


def apply_sign_flips(y: BitMeasurements, rho: float, rng: np.random.Generator) -> BitMeasurements:
    """Negate each bit independently with probability rho (0 <= rho < 0.5)."""
    if not 0.0 <= rho < 0.5:
        raise InvalidParameterError(f"flip ratio must lie in [0, 0.5), got {rho}")
    # Always consume M uniforms so the stream position does not depend on rho.
    flips = rng.random(len(y)) < rho
    return BitMeasurements(np.where(flips, -y.bits, y.bits), float(rho))


def recovery_error(x, x_star) -> float:
    """Relative error ||x - x*||_2 / ||x||_2."""
    xv = x.values if isinstance(x, SparseSignal) else np.asarray(x, dtype=np.float64)
    xs = np.asarray(x_star, dtype=np.float64)
    if xv.shape != xs.shape:
        raise DimensionMismatchError(f"shapes differ: {xv.shape} vs {xs.shape}")
    return float(np.linalg.norm(xv - xs) / np.linalg.norm(xv))


def support_detection_accuracy(true_supp, est_supp) -> float:
    """Percentage of the true support present in the estimated support."""
    true_set = {int(i) for i in np.ravel(true_supp)}
    if not true_set:
        raise EmptySupportError("true support must be nonempty")
    est_set = {int(i) for i in np.ravel(est_supp)}
    return 100.0 * len(true_set & est_set) / len(true_set)
