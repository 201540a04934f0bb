"""Property-based checks of the module invariants."""

import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from onebit_cs.hamming import flip_probability, lemma2_lower_bound
from onebit_cs.history import HistoryParams, estimate_proxy, history_recover
from onebit_cs.lstsq import hard_threshold, normalize
from onebit_cs.montecarlo import empirical_flip_frequencies, lemma2_order_frequency
from onebit_cs.signal_model import (
    BitMeasurements,
    MeasurementEnsemble,
    apply_sign_flips,
    gen_measurement_matrix,
    gen_sparse_signal,
    make_rng,
    measure,
)

rhos = st.floats(0.0, 0.49)
coefs = st.floats(-0.999, 0.999)
# Coefficients on a 1e-6 grid: closer values can collide after arccos rounding.
grid = st.integers(-999_999, 999_999).map(lambda i: i / 1e6)
seeds = st.integers(0, 2**32 - 1)


@given(grid, grid, rhos)
def test_flip_probability_strictly_decreasing(a, b, rho):
    if a == b:
        return
    lo, hi = min(a, b), max(a, b)
    assert flip_probability(lo, rho) > flip_probability(hi, rho)


@given(st.lists(grid, min_size=2, max_size=30, unique=True), rhos, rhos)
def test_proxy_order_independent_of_rho(xs, r1, r2):
    xs = np.array(xs)
    h1 = np.cos(np.pi * np.asarray(flip_probability(xs, r1)))
    h2 = np.cos(np.pi * np.asarray(flip_probability(xs, r2)))
    # h = sin((1 - 2 rho) arcsin x): strictly increasing in x for rho < 0.5.
    assert np.array_equal(np.argsort(-h1, kind="stable"), np.argsort(-xs, kind="stable"))
    assert np.array_equal(np.argsort(-h1, kind="stable"), np.argsort(-h2, kind="stable"))


@given(seeds, st.integers(1, 60), st.integers(1, 30))
@settings(max_examples=50, deadline=None)
def test_proxy_and_probability_ranges(seed, m, n):
    rng = make_rng(seed)
    a = gen_measurement_matrix(m, n, rng)
    y = BitMeasurements(np.where(rng.random(m) < 0.5, -1.0, 1.0))
    proxy = estimate_proxy(y, a)
    assert np.all((proxy.flip.p >= 0) & (proxy.flip.p <= 1))
    assert np.all(np.abs(proxy.h) <= 1)


@given(st.lists(st.floats(-1e6, 1e6, allow_nan=False), min_size=1, max_size=40), st.data())
def test_hard_threshold_idempotent_and_sparse(v, data):
    k = data.draw(st.integers(1, len(v)))
    once = hard_threshold(v, k)
    assert np.array_equal(hard_threshold(once, k), once)
    assert np.count_nonzero(once) <= k


@given(st.lists(st.floats(-1e6, 1e6, allow_nan=False), min_size=1, max_size=40))
def test_normalize_unit(v):
    v = np.array(v)
    if np.linalg.norm(v) < 1e-300:
        return
    assert abs(np.linalg.norm(normalize(v)) - 1) <= 1e-12


@given(seeds, st.floats(1e-3, 1e3))
@settings(max_examples=30)
def test_measure_scale_invariant(seed, c):
    rng = make_rng(seed)
    x = gen_sparse_signal(25, 4, rng)
    a = gen_measurement_matrix(40, 25, rng)
    assert np.array_equal(measure(a, c * x.values).bits, measure(a, x).bits)


@given(seeds, st.integers(1, 5), rhos)
@settings(max_examples=30, deadline=None)
def test_history_output_invariants(seed, k, rho):
    rng = make_rng(seed)
    x = gen_sparse_signal(40, k, rng)
    a = gen_measurement_matrix(120, 40, rng)
    y = apply_sign_flips(measure(a, x), rho, rng)
    res = history_recover(y, a, HistoryParams(k))
    if res.ok:
        assert abs(np.linalg.norm(res.x_star) - 1) <= 1e-12
        assert np.count_nonzero(res.x_star) <= k
        assert set(res.support) <= set(res.candidate_support.indices)
    else:
        assert not np.any(res.x_star)


@given(seeds)
@settings(max_examples=20, deadline=None)
def test_generators_reproducible(seed):
    def draw():
        rng = make_rng(seed)
        x = gen_sparse_signal(30, 3, rng)
        a = gen_measurement_matrix(20, 30, rng)
        return x.values, a.entries, apply_sign_flips(measure(a, x), 0.2, rng).bits

    for u, v in zip(draw(), draw()):
        assert np.array_equal(u, v)


def tie_free_instance(n, k, m, rho, seed):
    """An instance whose |h| values are pairwise distinct (so selection has no ties)."""
    while True:
        rng = make_rng(seed)
        x = gen_sparse_signal(n, k, rng)
        a = gen_measurement_matrix(m, n, rng)
        y = apply_sign_flips(measure(a, x), rho, rng)
        h = np.abs(estimate_proxy(y, a).h)
        if np.unique(h).size == n:
            return x, a, y
        seed += 1


def check_permutation_equivariance(a, y, params, perms):
    base = history_recover(y, a, params)
    for perm in perms:
        perm = np.asarray(perm)
        res = history_recover(y, MeasurementEnsemble(a.entries[:, perm]), params)
        assert np.array_equal(res.x_star, base.x_star[perm])


def test_permutation_equivariance_exhaustive_n6():
    x, a, y = tie_free_instance(6, 2, 400, 0.1, seed=100)
    check_permutation_equivariance(a, y, HistoryParams(2, alpha=2.0), itertools.permutations(range(6)))


def test_detection_ignores_flip_ratio_parameter():
    # The same y and A always give the same candidate support, whatever rho
    # was used to produce y.
    rng = make_rng(9)
    x = gen_sparse_signal(50, 4, rng)
    a = gen_measurement_matrix(300, 50, rng)
    y = apply_sign_flips(measure(a, x), 0.2, rng)
    relabelled = BitMeasurements(y.bits, flip_ratio=0.0)
    r1 = history_recover(y, a, HistoryParams(4))
    r2 = history_recover(relabelled, a, HistoryParams(4))
    assert np.array_equal(r1.candidate_support.indices, r2.candidate_support.indices)
    assert np.array_equal(r1.x_star, r2.x_star)


@pytest.mark.parametrize("rho", [0.0, 0.2])
def test_flip_law_concentration(rho):
    # Binomial 4-sigma band holds in at least 99% of repetitions.
    x = np.array([0.6, -0.8, 0.0])
    p = np.asarray(flip_probability(x, rho))
    m = 2000
    band = 4 * np.sqrt(p * (1 - p) / m)
    rng = make_rng(31)
    inside = 0
    reps = 200
    for _ in range(reps):
        freq = empirical_flip_frequencies(x, m, rho, rng)
        inside += np.all(np.abs(freq - p) <= band)
    assert inside >= 0.99 * reps


@pytest.mark.parametrize("m,rho,xu,xv,eps", [(400, 0.1, 0.4, 0.1, 0.3), (2000, 0.2, 0.3, 0.1, 0.2)])
def test_ordering_frequency_above_bound(m, rho, xu, xv, eps):
    bound = lemma2_lower_bound(m, rho, eps)
    assert 0 < bound < 1
    freq = lemma2_order_frequency(xu, xv, m, rho, 1000, make_rng(17))
    assert freq >= bound
