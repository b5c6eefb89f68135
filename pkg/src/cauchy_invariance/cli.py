"""Command-line entry point: ``cauchy-invariance --experiment NAME [options]``.

Exit status is 0 iff every gate in the report passed, 1 if a gate failed,
and 2 on an invalid configuration or an I/O error.
"""
from __future__ import annotations

import argparse
import os
import sys

from .errors import InvalidConfigError
from .exits import DOMAIN_KINDS
from .experiments import (EXPERIMENTS, INVARIANCE_MAPS, ExperimentConfig, default_seed,
                          dump_samples, emit, report_json, run_experiment)
from .maps import PWParams


def _term(text):
    try:
        an, bn = (float(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a_n,b_n, got {text!r}")
    return an, bn


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="cauchy-invariance",
        description="Monte Carlo checks of Cauchy/sech invariance, Brownian exit laws "
                    "and Boole/Newton orbits.")
    p.add_argument("--experiment", required=True, choices=EXPERIMENTS)
    p.add_argument("--seed", type=int, default=None,
                   help="base seed (default: $CAUCHY_INVARIANCE_SEED or 0)")
    p.add_argument("--n", type=int, default=None,
                   help="sample count, or orbit length (default 1e5; 1e6 for orbit)")
    p.add_argument("--dt", type=float, default=1e-3, help="Euler step size")
    p.add_argument("--domain", choices=DOMAIN_KINDS, default="upper-half-plane")
    p.add_argument("--method", choices=("exact", "euler"), default=None,
                   help="exit sampler (default: exact for half-planes, euler for the strip)")
    p.add_argument("--map", choices=INVARIANCE_MAPS, default="boole")
    p.add_argument("--source", choices=("cauchy", "sech"), default=None)
    p.add_argument("--x0", type=float, default=2.0)
    p.add_argument("--observable", choices=("all", "inv1p2", "unit_indicator"), default="all")
    p.add_argument("--pw-a", type=float, default=None)
    p.add_argument("--pw-b", type=float, default=None)
    p.add_argument("--pw-term", type=_term, action="append", default=[], metavar="A_N,B_N")
    p.add_argument("--workers", type=int, default=os.cpu_count() or 1)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--out", default=None, help="report path (default: stdout)")
    p.add_argument("--dump-samples", default=None, metavar="PATH",
                   help="write the gated sample with its ECDF as CSV")
    return p


def config_from_args(args) -> ExperimentConfig:
    pw = None
    if args.pw_a is not None or args.pw_b is not None or args.pw_term:
        pw = PWParams(args.pw_a or 0.0, args.pw_b or 0.0, tuple(args.pw_term))
    return ExperimentConfig(
        experiment=args.experiment,
        seed=default_seed() if args.seed is None else args.seed,
        n=args.n, domain=args.domain, method=args.method, map=args.map,
        source=args.source, x0=args.x0, observable=args.observable, dt=args.dt,
        workers=args.workers, pw=pw, format=args.format, out=args.out,
        dump_samples=args.dump_samples,
    )


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    cfg = config_from_args(args)
    try:
        cfg = cfg.resolved()
        report = run_experiment(cfg)
    except InvalidConfigError as exc:
        print(f"invalid configuration: {exc}", file=sys.stderr)
        return 2
    try:
        if cfg.out is None:
            if cfg.format == "json":
                sys.stdout.write(report_json(report) + "\n")
            else:
                emit(report, "csv", "/dev/stdout")
        else:
            emit(report, cfg.format, cfg.out)
        if cfg.dump_samples is not None and report.samples is not None:
            dump_samples(report, cfg.dump_samples)
    except OSError as exc:
        print(f"cannot write output: {exc}", file=sys.stderr)
        return 2
    for g in report.gates:
        status = "PASS" if g.passed else "FAIL"
        print(f"{status} {g.name}: {g.observed:.6g} {g.relation} {g.threshold:.6g}"
              + (f" ({g.note})" if g.note else ""), file=sys.stderr)
    return 0 if report.passed else 1


if __name__ == "__main__":
    sys.exit(main())
