"""Seeded Monte-Carlo sweeps over the experiment grids and their summaries.

Every trial draws one (x, A, y) instance from a seed derived from
``(base_seed, experiment, (m, n, k, rho), trial)``; all algorithms and all
method variants at that grid point (alpha settings, selected sparsity) are
run on that same instance.
"""

from __future__ import annotations

import csv
import io
import itertools
import json
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, fields, replace
from typing import Iterable, Iterator, List, Optional, Sequence, Union

import numpy as np

from .baselines import BihtParams, PassiveParams, biht_l2_recover, passive_recover
from .errors import OneBitCSError
from .history import HistoryParams, history_recover, warm_up
from .signal_model import (
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
    "EXPERIMENTS",
    "ALGORITHMS",
    "CSV_HEADER",
    "ConfigError",
    "SweepConfig",
    "TrialRecord",
    "SummaryRow",
    "default_config",
    "load_config",
    "run_sweep",
    "sda_alpha_experiment",
    "aggregate",
    "write_csv",
    "records_to_csv",
    "format_summary",
]

EXPERIMENTS = (
    "alpha_sda",
    "alpha_time",
    "error_vs_m",
    "error_vs_k",
    "error_vs_rho",
    "misspecified_k",
    "runtime_table",
)
ALGORITHMS = ("history", "biht_l2", "passive")
CSV_HEADER = (
    "experiment", "m", "n", "k", "rho", "k_select", "alpha", "trial", "seed",
    "algorithm", "error", "sda", "time_s", "status",
)

M_GRID = [200, 400, 800, 1500, 2000, 3000, 4000]
K_GRID = [10, 25, 50, 100, 150, 200]
# The flip law needs rho < 0.5, so the grid tops out at 0.45.
RHO_GRID = [0.0, 0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.35, 0.4, 0.45]
ALPHA_VARIANTS = ["adaptive", 1, 2, 4, 8]

Grid = Union[int, float, Sequence]


class ConfigError(OneBitCSError):
    pass


def _as_list(v) -> list:
    if isinstance(v, (list, tuple)):
        return list(v)
    return [v]


@dataclass(frozen=True)
class SweepConfig:
    """One experiment: data grid, algorithms, trial count and seed.

    ``m``, ``n``, ``k`` and ``rho`` accept a scalar or a list. ``alpha`` is
    either ``"adaptive"`` or a fixed number >= 1; ``alphas`` lists the
    variants compared by the alpha experiments. ``k_select`` (misspecified
    model only) lists the sparsity handed to the algorithms.
    """

    experiment: str
    n: Grid = 1000
    k: Grid = 10
    rho: Grid = 0.1
    m: Grid = 4000
    trials: int = 100
    base_seed: int = 0
    algorithms: tuple = ALGORITHMS
    alpha: Union[str, float] = "adaptive"
    alpha0: float = 4.0
    tau: float = 1.0
    alphas: tuple = tuple(ALPHA_VARIANTS)
    k_select: Optional[tuple] = None
    biht_max_iters: int = 200
    biht_step_size: float = 1.0
    biht_early_stop: bool = True
    threads: int = 1

    def __post_init__(self):
        for name in ("algorithms", "alphas", "k_select"):
            v = getattr(self, name)
            if v is not None:
                object.__setattr__(self, name, tuple(_as_list(v)))
        self.validate()

    @property
    def grid(self) -> List[tuple]:
        """Data-generating points (m, n, k, rho) in sweep order."""
        return list(
            itertools.product(
                _as_list(self.m), _as_list(self.n), _as_list(self.k), _as_list(self.rho)
            )
        )

    def history_params(self, k: int, alpha=None) -> HistoryParams:
        alpha = self.alpha if alpha is None else alpha
        fixed = None if alpha == "adaptive" else float(alpha)
        return HistoryParams(k, fixed, self.alpha0, self.tau)

    def variants(self, k: int) -> List[tuple]:
        """(algorithm, k used by the algorithm, alpha setting or None)."""
        if self.experiment in ("alpha_sda", "alpha_time"):
            return [("history", k, a) for a in self.alphas]
        ks = list(self.k_select) if self.k_select else [k]
        return [
            (alg, ks_, self.alpha if alg == "history" else None)
            for ks_ in ks
            for alg in self.algorithms
        ]

    def validate(self):
        if self.experiment not in EXPERIMENTS:
            raise ConfigError(f"unknown experiment {self.experiment!r}; choose from {EXPERIMENTS}")
        for name in ("m", "n", "k", "rho"):
            if not _as_list(getattr(self, name)):
                raise ConfigError(f"grid {name!r} is empty")
        if self.trials < 1:
            raise ConfigError("trials must be >= 1")
        if self.threads < 1:
            raise ConfigError("threads must be >= 1")
        if not self.algorithms:
            raise ConfigError("at least one algorithm is required")
        bad = set(self.algorithms) - set(ALGORITHMS)
        if bad:
            raise ConfigError(f"unknown algorithms {sorted(bad)}")
        if self.experiment in ("alpha_sda", "alpha_time"):
            if not self.alphas:
                raise ConfigError("alphas must be nonempty")
        if self.k_select is not None and not self.k_select:
            raise ConfigError("k_select must be nonempty when given")
        try:
            self.history_params(1)
            for a in self.alphas:
                self.history_params(1, a)
            BihtParams(1, self.biht_max_iters, self.biht_step_size)
        except (OneBitCSError, TypeError, ValueError) as exc:
            raise ConfigError(str(exc)) from exc
        for m, n, k, rho in self.grid:
            if not (isinstance(m, int) and isinstance(n, int) and isinstance(k, int)):
                raise ConfigError(f"m, n, k must be integers, got {(m, n, k)}")
            if m < 2 or n < 1:
                raise ConfigError(f"need m >= 2 and n >= 1, got m={m}, n={n}")
            if not 1 <= k <= n:
                raise ConfigError(f"need 1 <= k <= n, got k={k}, n={n}")
            if not 0.0 <= rho < 0.5:
                raise ConfigError(f"rho must lie in [0, 0.5), got {rho}")
            for alg, ks, _ in self.variants(k):
                if not isinstance(ks, int) or ks < 1 or ks > n:
                    raise ConfigError(f"selected sparsity {ks} out of range for n={n}")
                if alg == "history" and ks > min(n, m - 1):
                    raise ConfigError(f"HISTORY needs k <= min(N, M - 1); got k={ks}, m={m}, n={n}")


def default_config(experiment: str, **overrides) -> SweepConfig:
    """Grid defaults for each experiment; keyword arguments override them."""
    base = dict(experiment=experiment, n=1000, k=10, rho=0.1, m=4000)
    if experiment in ("alpha_sda", "alpha_time"):
        base.update(m=M_GRID, algorithms=("history",))
    elif experiment == "error_vs_m":
        base.update(m=M_GRID)
    elif experiment == "error_vs_k":
        base.update(k=K_GRID)
    elif experiment == "error_vs_rho":
        base.update(rho=RHO_GRID)
    elif experiment == "misspecified_k":
        base.update(k_select=tuple(range(1, 21)))
    elif experiment == "runtime_table":
        base.update(biht_max_iters=100, biht_early_stop=False)
    elif experiment not in EXPERIMENTS:
        raise ConfigError(f"unknown experiment {experiment!r}")
    base.update(overrides)
    return SweepConfig(**base)


def load_config(path, experiment: Optional[str] = None, **overrides) -> SweepConfig:
    """Read a JSON object whose keys are SweepConfig field names."""
    with open(path, encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: invalid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: expected a JSON object")
    known = {f.name for f in fields(SweepConfig)}
    unknown = set(data) - known
    if unknown:
        raise ConfigError(f"{path}: unknown keys {sorted(unknown)}")
    exp = data.pop("experiment", experiment)
    if experiment is not None and exp != experiment:
        raise ConfigError(f"config is for {exp!r} but {experiment!r} was requested")
    if exp is None:
        raise ConfigError("no experiment given")
    data.update({k: v for k, v in overrides.items() if v is not None})
    try:
        return default_config(exp, **data)
    except TypeError as exc:
        raise ConfigError(str(exc)) from exc


@dataclass(frozen=True)
class TrialRecord:
    experiment: str
    m: int
    n: int
    k: int
    rho: float
    k_select: int
    alpha: str
    trial: int
    seed: int
    algorithm: str
    error: float
    sda: float
    time_s: float
    status: str

    def row(self) -> list:
        out = []
        for name in CSV_HEADER:
            v = getattr(self, name)
            out.append(repr(float(v)) if isinstance(v, float) else str(v))
        return out


def _recover(cfg: SweepConfig, alg: str, y, a, k: int, alpha):
    if alg == "history":
        return history_recover(y, a, cfg.history_params(k, alpha))
    if alg == "passive":
        return passive_recover(y, a, PassiveParams(k))
    return biht_l2_recover(
        y, a, BihtParams(k, cfg.biht_max_iters, cfg.biht_step_size, cfg.biht_early_stop)
    )


def _run_trial(cfg: SweepConfig, point: tuple, trial: int) -> List[TrialRecord]:
    m, n, k, rho = point
    seed = derive_seed(cfg.base_seed, cfg.experiment, point, trial)
    rng = make_rng(seed)
    x = gen_sparse_signal(n, k, rng)
    a = gen_measurement_matrix(m, n, rng)
    y = apply_sign_flips(measure(a, x), rho, rng)
    records = []
    for alg, ks, alpha in cfg.variants(k):
        t0 = time.perf_counter()
        res = _recover(cfg, alg, y, a, ks, alpha)
        elapsed = time.perf_counter() - t0
        if res.ok:
            err = recovery_error(x, res.x_star)
            sda = support_detection_accuracy(x.support, res.support)
        else:
            err, sda = 1.0, 0.0
        desc = cfg.history_params(ks, alpha).describe() if alg == "history" else ""
        records.append(
            TrialRecord(cfg.experiment, m, n, k, float(rho), ks, desc, trial, seed, alg,
                        float(err), float(sda), float(elapsed), res.status)
        )
    return records


def run_sweep(cfg: SweepConfig) -> Iterator[TrialRecord]:
    """Yield records in (grid point, trial, variant) order.

    With ``threads > 1`` trials run in a thread pool (the numeric kernels
    release the GIL); output order is unchanged. ``runtime_table`` always
    runs on one thread.
    """
    jobs = [(p, t) for p in cfg.grid for t in range(cfg.trials)]
    warm_up()
    threads = 1 if cfg.experiment == "runtime_table" else cfg.threads
    if threads == 1:
        for p, t in jobs:
            yield from _run_trial(cfg, p, t)
        return
    with ThreadPoolExecutor(max_workers=threads) as pool:
        for recs in pool.map(lambda job: _run_trial(cfg, *job), jobs):
            yield from recs


def sda_alpha_experiment(cfg: SweepConfig) -> List[TrialRecord]:
    """Adaptive versus fixed alpha, HISTORY only, tagged by alpha descriptor."""
    if cfg.experiment not in ("alpha_sda", "alpha_time"):
        cfg = replace(cfg, experiment="alpha_sda")
    return list(run_sweep(replace(cfg, algorithms=("history",))))


@dataclass(frozen=True)
class SummaryRow:
    experiment: str
    m: int
    n: int
    k: int
    rho: float
    k_select: int
    alpha: str
    algorithm: str
    trials: int
    failures: int
    mean_error: float
    mean_sda: float
    total_time_s: float


def aggregate(records: Iterable[TrialRecord]) -> List[SummaryRow]:
    """Means over trials per (grid point, variant), in first-seen order.

    Failed trials enter with error 1 and SDA 0, which is what the records
    already carry.
    """
    groups = {}
    for r in records:
        key = (r.experiment, r.m, r.n, r.k, r.rho, r.k_select, r.alpha, r.algorithm)
        groups.setdefault(key, []).append(r)
    if not groups:
        raise OneBitCSError("cannot aggregate an empty record set")
    rows = []
    for key, rs in groups.items():
        err = [1.0 if r.status != "ok" else r.error for r in rs]
        sda = [0.0 if r.status != "ok" else r.sda for r in rs]
        rows.append(
            SummaryRow(*key, trials=len(rs), failures=sum(r.status != "ok" for r in rs),
                       mean_error=float(np.mean(err)), mean_sda=float(np.mean(sda)),
                       total_time_s=float(sum(r.time_s for r in rs)))
        )
    return rows


def write_csv(records: Iterable[TrialRecord], fh) -> int:
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    count = 0
    for r in records:
        writer.writerow(r.row())
        count += 1
    return count


def records_to_csv(records: Iterable[TrialRecord]) -> str:
    buf = io.StringIO()
    write_csv(records, buf)
    return buf.getvalue()


def format_summary(rows: Sequence[SummaryRow]) -> str:
    head = f"{'m':>6} {'n':>6} {'k':>5} {'rho':>6} {'k_sel':>5} {'alpha':>16} {'algorithm':>9} {'error':>9} {'sda':>7} {'time_s':>9} {'fail':>4}"
    lines = [head]
    for r in rows:
        lines.append(
            f"{r.m:>6} {r.n:>6} {r.k:>5} {r.rho:>6.3g} {r.k_select:>5} {r.alpha:>16} "
            f"{r.algorithm:>9} {r.mean_error:>9.4f} {r.mean_sda:>7.2f} {r.total_time_s:>9.3f} {r.failures:>4}"
        )
    return "\n".join(lines)
