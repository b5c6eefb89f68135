"""Run every named experiment at its default size and write JSON reports.

    python scripts/run_all_experiments.py --seed 1 --outdir reports/
"""
import argparse
import pathlib

from cauchy_invariance.experiments import ExperimentConfig, emit, run_experiment

RUNS = {
    "exit_upper": dict(experiment="exit-sim", domain="upper-half-plane"),
    "exit_strip": dict(experiment="exit-sim", domain="strip"),
    "exit_right": dict(experiment="exit-sim", domain="right-half-plane"),
    "orbit_boole": dict(experiment="orbit", map="boole"),
    "orbit_simpson": dict(experiment="orbit", map="simpson_newton"),
    "invariance_boole": dict(experiment="invariance-check", map="boole"),
    "invariance_simpson": dict(experiment="invariance-check", map="simpson_newton"),
    "invariance_sech": dict(experiment="invariance-check", map="sech_map"),
    "pw": dict(experiment="pw-check"),
    "cf": dict(experiment="cf-check"),
}


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--outdir", default="reports")
    args = ap.parse_args()
    outdir = pathlib.Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    for name, kw in RUNS.items():
        report = run_experiment(ExperimentConfig(seed=args.seed, workers=args.workers, **kw))
        emit(report, "json", outdir / f"{name}.json")
        failed = [g.name for g in report.gates if not g.passed]
        print(f"{name:20s} {'PASS' if report.passed else 'FAIL'} "
              f"{report.timings['total']:7.2f}s {' '.join(failed)}")


if __name__ == "__main__":
    main()
