"""``onebit-cs`` command line.

Exit codes: 0 success, 1 configuration error, 2 I/O error.
"""

from __future__ import annotations

import argparse
import csv
import sys

import numpy as np

from . import __version__
from .bench import EXPERIMENTS, ConfigError, aggregate, default_config, format_summary, load_config, run_sweep, write_csv
from .errors import OneBitCSError
from .history import HistoryParams, history_recover
from .montecarlo import verify_laws
from .signal_model import BitMeasurements, MeasurementEnsemble, make_rng

EXIT_OK, EXIT_CONFIG, EXIT_IO = 0, 1, 2


def _u64(text):
    v = int(text, 0)
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return v


def _alpha(text):
    if text == "adaptive":
        return None
    return float(text)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="onebit-cs", description="1-bit compressed sensing recovery and benchmarks")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run a seeded experiment sweep and write per-trial CSV")
    run.add_argument("experiment", choices=EXPERIMENTS)
    run.add_argument("--config", help="JSON file with SweepConfig fields")
    run.add_argument("--seed", type=_u64, help="base seed (overrides config)")
    run.add_argument("--trials", type=int, help="trials per grid point (overrides config)")
    run.add_argument("--out", help="CSV output path (default: stdout)")
    run.add_argument("--threads", type=int, help="worker threads (overrides config)")

    laws = sub.add_parser("verify-laws", help="Monte-Carlo check of the flip-probability laws")
    laws.add_argument("--samples", type=int, default=200_000, help="Gaussian rows per flip-law check")
    laws.add_argument("--seed", type=_u64, default=0)
    laws.add_argument("--lemma2-reps", type=int, default=2000, help="matrix redraws for the ordering bound")

    rec = sub.add_parser("recover", help="one-shot HISTORY recovery from CSV files")
    rec.add_argument("--matrix", required=True, help="CSV of reals, one row per measurement")
    rec.add_argument("--bits", required=True, help="CSV of +-1 values")
    rec.add_argument("--k", type=int, required=True)
    rec.add_argument("--alpha", type=_alpha, default=None, help="'adaptive' (default) or a fixed value >= 1")
    rec.add_argument("--alpha0", type=float, default=4.0)
    rec.add_argument("--tau", type=float, default=1.0)
    rec.add_argument("--out", help="write the recovered vector here (default: stdout)")
    return p


def _cmd_run(args) -> int:
    overrides = dict(base_seed=args.seed, trials=args.trials, threads=args.threads)
    overrides = {k: v for k, v in overrides.items() if v is not None}
    try:
        if args.config:
            cfg = load_config(args.config, args.experiment, **overrides)
        else:
            cfg = default_config(args.experiment, **overrides)
    except OSError as exc:
        print(f"error: cannot read config: {exc}", file=sys.stderr)
        return EXIT_IO
    except (ConfigError, OneBitCSError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    records = []

    def tee():
        for r in run_sweep(cfg):
            records.append(r)
            yield r

    try:
        if args.out:
            with open(args.out, "w", encoding="utf-8", newline="") as fh:
                write_csv(tee(), fh)
        else:
            write_csv(tee(), sys.stdout)
    except OSError as exc:
        print(f"error: cannot write output: {exc}", file=sys.stderr)
        return EXIT_IO
    summary = format_summary(aggregate(records))
    print(summary, file=sys.stdout if args.out else sys.stderr)
    return EXIT_OK


def _cmd_verify(args) -> int:
    if args.samples < 1 or args.lemma2_reps < 1:
        print("config error: --samples and --lemma2-reps must be positive", file=sys.stderr)
        return EXIT_CONFIG
    results = verify_laws(args.samples, make_rng(args.seed), lemma2_reps=args.lemma2_reps)
    for r in results:
        verdict = "PASS" if r["passed"] else "FAIL"
        if r["check"] == "flip_law":
            print(f"{verdict} flip law rho={r['rho']:g}: max deviation {r['max_deviation']:.6f} (4-sigma {r['tolerance']:.6f})")
        else:
            print(f"{verdict} ordering bound rho={r['rho']:g}: frequency {r['frequency']:.4f} >= bound {r['bound']:.4f}")
    return EXIT_OK


def _read_csv_matrix(path):
    with open(path, encoding="utf-8", newline="") as fh:
        rows = [[float(v) for v in row] for row in csv.reader(fh) if row]
    return np.array(rows, dtype=np.float64)


def _cmd_recover(args) -> int:
    try:
        a = _read_csv_matrix(args.matrix)
        bits = _read_csv_matrix(args.bits).ravel()
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        print(f"config error: malformed CSV: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        params = HistoryParams(args.k, args.alpha, args.alpha0, args.tau)
        res = history_recover(BitMeasurements(bits), MeasurementEnsemble(a), params)
    except OneBitCSError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    if not res.ok:
        print(f"recovery failed: {res.status}: {res.message}", file=sys.stderr)
    lines = "\n".join(repr(float(v)) for v in res.x_star) + "\n"
    try:
        if args.out:
            with open(args.out, "w", encoding="utf-8", newline="") as fh:
                fh.write(lines)
        else:
            sys.stdout.write(lines)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "run":
        return _cmd_run(args)
    if args.command == "verify-laws":
        return _cmd_verify(args)
    return _cmd_recover(args)


if __name__ == "__main__":
    sys.exit(main())
