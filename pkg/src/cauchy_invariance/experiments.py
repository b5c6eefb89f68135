"""Named experiments that bind samplers, maps, orbits and statistics into reports.

Every experiment produces a :class:`Report`: a config echo, summary
statistics, one :class:`Gate` per statistical or numerical check, counts of
guard/pole/max-step events, and wall-clock timings. A report passes iff every
gate passes.

Randomness is split over ``workers`` streams ``(seed, 0..workers-1)``; each
stream produces a contiguous share of the ``n`` draws and shares are merged
in stream-id order, so results depend only on ``(seed, workers)``.
"""
from __future__ import annotations

import csv
import json
import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from contextlib import contextmanager
from dataclasses import asdict, dataclass, field

import numpy as np

from . import maps
from .ergodic import OBSERVABLE_LIMITS, OBSERVABLES, OrbitConfig, orbit
from .errors import InvalidConfigError
from .exits import (DOMAIN_KINDS, RIGHT_HALF_PLANE, STRIP, UPPER_HALF_PLANE, DomainSpec,
                    ExitBatch, sample_exits_euler, sample_exits_exact, strip_components)
from .maps import BOOLE_PARAMS, MOBIUS_PARAMS, PWParams
from .samplers import RandomSource, sample_cauchy, sample_sech, split_counts
from .stats import (EmpiricalDistribution, cauchy_cdf, correlation, empirical_cf,
                    ks_critical_two_sample, ks_one_sample, ks_two_sample, quantiles, sech_cdf)

EXPERIMENTS = ("exit-sim", "orbit", "invariance-check", "pw-check", "cf-check")
CAUCHY_MAPS = ("boole", "simpson_newton", "pw")
INVARIANCE_MAPS = CAUCHY_MAPS + ("sech_map",)
SEED_ENV = "CAUCHY_INVARIANCE_SEED"

CF_TOL = 0.012
FIXED_POINT_TOL = 1e-12
CONJUGACY_TOL = 1e-10


@dataclass
class ExperimentConfig:
    experiment: str
    seed: int = 0
    n: int | None = None
    domain: str = UPPER_HALF_PLANE
    method: str | None = None
    map: str = "boole"
    source: str | None = None
    x0: float = 2.0
    observable: str = "all"
    dt: float = 1e-3
    workers: int = 1
    pw: PWParams | None = None
    format: str = "json"
    out: str | None = None
    dump_samples: str | None = None

    def resolved(self) -> "ExperimentConfig":
        """Validate every selector and fill experiment-specific defaults."""
        if self.experiment not in EXPERIMENTS:
            raise InvalidConfigError(f"unknown experiment {self.experiment!r}")
        if self.format not in ("json", "csv"):
            raise InvalidConfigError(f"unknown output format {self.format!r}")
        if self.workers < 1:
            raise InvalidConfigError("workers must be at least 1")
        cfg = ExperimentConfig(**{k: getattr(self, k) for k in self.__dataclass_fields__})
        if cfg.n is None:
            cfg.n = 10 ** 6 if cfg.experiment == "orbit" else 10 ** 5
        if cfg.n < 1:
            raise InvalidConfigError("n must be positive")
        if cfg.workers > cfg.n:
            raise InvalidConfigError("more workers than samples")

        if cfg.experiment == "exit-sim":
            if cfg.domain not in DOMAIN_KINDS:
                raise InvalidConfigError(f"unknown domain {cfg.domain!r}")
            if cfg.method is None:
                cfg.method = "euler" if cfg.domain == STRIP else "exact"
            if cfg.method not in ("exact", "euler"):
                raise InvalidConfigError(f"unknown method {cfg.method!r}")
            if cfg.method == "exact" and cfg.domain == STRIP:
                raise InvalidConfigError("the strip has no exact sampler; use --method euler")
            if cfg.method == "euler" and not 0 < cfg.dt <= 1e-2:
                raise InvalidConfigError("dt must lie in (0, 1e-2]")
        elif cfg.experiment == "orbit":
            if cfg.map not in CAUCHY_MAPS:
                raise InvalidConfigError(f"orbit map must be one of {CAUCHY_MAPS}")
            if cfg.observable != "all" and cfg.observable not in OBSERVABLES:
                raise InvalidConfigError(f"unknown observable {cfg.observable!r}")
            if not math.isfinite(cfg.x0):
                raise InvalidConfigError("x0 must be finite")
        elif cfg.experiment == "invariance-check":
            if cfg.map not in INVARIANCE_MAPS:
                raise InvalidConfigError(f"invariance map must be one of {INVARIANCE_MAPS}")
            natural = "sech" if cfg.map == "sech_map" else "cauchy"
            if cfg.source is None:
                cfg.source = natural
            if cfg.source != natural:
                raise InvalidConfigError(f"map {cfg.map} preserves the {natural} law, "
                                         f"not {cfg.source}")
        if cfg.map == "pw" and cfg.experiment in ("orbit", "invariance-check"):
            if cfg.pw is None:
                raise InvalidConfigError("map pw needs parameters (--pw-a/--pw-b/--pw-term)")
            violations = maps.pw_validate(cfg.pw)
            if violations:
                raise InvalidConfigError("invalid PW parameters: " + "; ".join(violations))
        return cfg

    def echo(self) -> dict:
        d = asdict(self)
        d["pw"] = None if self.pw is None else {
            "a": self.pw.a, "b": self.pw.b, "terms": [list(t) for t in self.pw.terms]}
        for key in ("out", "format", "dump_samples"):
            d.pop(key)
        return d


@dataclass
class Gate:
    name: str
    observed: float
    threshold: float
    passed: bool
    relation: str = "<"
    note: str | None = None


@dataclass
class Report:
    config: dict
    gates: list = field(default_factory=list)
    summary: dict = field(default_factory=dict)
    counts: dict = field(default_factory=dict)
    timings: dict = field(default_factory=dict)
    samples: np.ndarray | None = field(default=None, repr=False)
    reference_cdf: object = field(default=None, repr=False)

    @property
    def passed(self) -> bool:
        return all(g.passed for g in self.gates)

    def gate(self, name, observed, threshold, relation="<", note=None) -> Gate:
        observed = float(observed)
        ok = {"<": observed < threshold, "<=": observed <= threshold,
              ">=": observed >= threshold}[relation]
        g = Gate(name, observed, float(threshold), bool(ok), relation, note)
        self.gates.append(g)
        return g

    def gate_abs_dev(self, name, value, target, tol):
        return self.gate(name, abs(value - target), tol, "<=")

    def to_dict(self, include_timings=True) -> dict:
        d = {
            "config": self.config,
            "passed": self.passed,
            "gates": [asdict(g) for g in self.gates],
            "summary": self.summary,
            "counts": self.counts,
        }
        if include_timings:
            d["timings"] = self.timings
        return d

    @classmethod
    def from_dict(cls, d) -> "Report":
        return cls(config=d["config"], gates=[Gate(**g) for g in d["gates"]],
                   summary=d["summary"], counts=d["counts"], timings=d.get("timings", {}))


@contextmanager
def _timed(report: Report, stage: str):
    t0 = time.perf_counter()
    yield
    report.timings[stage] = report.timings.get(stage, 0.0) + time.perf_counter() - t0


def _per_stream(seed, n, workers, fn, offset=0):
    """Run ``fn(rng, count)`` on each stream; results come back in stream order."""
    counts = split_counts(n, workers)
    rngs = [RandomSource(seed, offset + k) for k in range(workers)]
    if workers == 1:
        return [fn(rngs[0], counts[0])]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, rngs, counts))


def _draws(sampler, seed, n, workers, offset=0):
    return np.concatenate(_per_stream(seed, n, workers, lambda r, c: sampler(r, size=c), offset))


# --------------------------------------------------------------------------
# experiments
# --------------------------------------------------------------------------

def _exit_sim(cfg: ExperimentConfig, report: Report):
    domain = DomainSpec(cfg.domain)
    with _timed(report, "sample"):
        if cfg.method == "exact":
            parts = _per_stream(cfg.seed, cfg.n, cfg.workers,
                                lambda r, c: sample_exits_exact(domain, r, c))
        else:
            parts = _per_stream(cfg.seed, cfg.n, cfg.workers,
                                lambda r, c: sample_exits_euler(domain, cfg.dt, r, c))
        batch = ExitBatch.merge(parts)
    report.counts["unexited_paths"] = batch.unexited
    if cfg.method == "euler":
        report.gate("unexited_paths", batch.unexited, 0, "<=")
        report.summary["mean_steps"] = float(np.mean(batch.steps_taken))
        report.summary["max_steps_taken"] = int(np.max(batch.steps_taken))
    z = batch.exit_points

    with _timed(report, "statistics"):
        if cfg.domain == UPPER_HALF_PLANE:
            x = z.real
            report.gate("ks_vs_cauchy", ks_one_sample(x, cauchy_cdf), 0.01)
            for theta in (0.5, 1.0, 2.0):
                cf = empirical_cf(x, theta)
                report.summary[f"cf_theta_{theta}"] = [cf.real, cf.imag]
                report.gate_abs_dev(f"cf_modulus_theta_{theta}", abs(cf), math.exp(-theta), CF_TOL)
            report.samples, report.reference_cdf = x, cauchy_cdf
        elif cfg.domain == STRIP:
            side, height = strip_components(batch)
            report.gate("ks_height_vs_sech", ks_one_sample(height, sech_cdf), 0.02)
            report.gate_abs_dev("side_frequency_right", np.mean(side == 1), 0.5, 0.005)
            report.gate("abs_corr_side_height", abs(correlation(side, height)), 0.01)
            report.gate("abs_corr_side_positive_height",
                        abs(correlation(side, height > 0)), 0.01)
            x = height
            report.samples, report.reference_cdf = x, sech_cdf
        else:
            arg_sign = np.where(z.imag > 0, 1.0, -1.0)
            y = maps.log_abs_map(np.abs(z))
            report.gate_abs_dev("arg_frequency_upper", np.mean(arg_sign > 0), 0.5, 0.005)
            report.gate("ks_log_modulus_vs_sech", ks_one_sample(y, sech_cdf), 0.015)
            for lam in (0.5, 1.0):
                cf = empirical_cf(y, lam)
                report.summary[f"cf_log_modulus_lambda_{lam}"] = [cf.real, cf.imag]
                report.gate_abs_dev(f"cf_log_modulus_lambda_{lam}", cf, 1.0 / math.cosh(lam), CF_TOL)
            report.gate("abs_corr_sign_arg_log_modulus",
                        abs(correlation(arg_sign, np.log(np.abs(z)))), 0.01)
            x = y
            report.samples, report.reference_cdf = x, sech_cdf
        report.summary["quartiles"] = quantiles(x, [0.25, 0.5, 0.75])


def _orbit(cfg: ExperimentConfig, report: Report):
    m = cfg.pw if cfg.map == "pw" else cfg.map
    names = list(OBSERVABLES) if cfg.observable == "all" else [cfg.observable]
    with _timed(report, "orbit"):
        result = orbit(OrbitConfig(m, cfg.x0, cfg.n), {k: OBSERVABLES[k] for k in names})
    report.counts["guard_fired"] = int(result.terminated_early)
    report.gate("orbit_completed", result.length, cfg.n, ">=", note=result.reason)
    if result.terminated_early:
        report.summary["termination_step"] = result.termination_step
        return
    with _timed(report, "statistics"):
        for name in names:
            report.summary[f"birkhoff_{name}"] = result.birkhoff_values[name]
            report.gate_abs_dev(f"birkhoff_{name}", result.birkhoff_values[name],
                                OBSERVABLE_LIMITS[name], 0.01)
        report.gate("ks_orbit_vs_cauchy", ks_one_sample(result.samples, cauchy_cdf), 0.02)
        report.summary["quartiles"] = quantiles(result.samples, [0.25, 0.5, 0.75])
        if cfg.map == "boole":
            report.gate("max_conjugacy_defect", max_conjugacy_defect(), CONJUGACY_TOL, "<=")
    report.samples, report.reference_cdf = result.values, cauchy_cdf


def conjugacy_grid(size=100, exclude=1e-3):
    axis = np.linspace(-1.0, 1.0, size)
    z = (axis[:, None] + 1j * axis[None, :]).ravel()
    return z[(np.abs(z) < 1.0) & (np.abs(z - 1.0) >= exclude)]


def max_conjugacy_defect(size=100, exclude=1e-3) -> float:
    return max(maps.conjugacy_defect(complex(z)) for z in conjugacy_grid(size, exclude))


def _cauchy_map(name, pw=None):
    """(vectorized real map, complex map) for a Cauchy-preserving map."""
    if name == "boole":
        return maps.boole_array, maps.boole_c
    if name == "simpson_newton":
        return maps.simpson_newton_array, maps.simpson_newton_c
    return (lambda x: maps.pw_eval_array(pw, x)), (lambda z: maps.pw_eval(pw, complex(z)))


def _pushforward_gates(report, prefix, forward, source, seed, n, workers, one_sample_tol=None):
    sampler, cdf = (sample_cauchy, cauchy_cdf) if source == "cauchy" else (sample_sech, sech_cdf)
    with _timed(report, "sample"):
        x = _draws(sampler, seed, n, workers)
        fresh = _draws(sampler, seed, n, workers, offset=workers)
    with _timed(report, "map"):
        y = forward(x)
        if isinstance(y, np.ma.MaskedArray):
            report.counts[f"{prefix}pole_hits"] = int(np.ma.count_masked(y))
            y = y.compressed()
    with _timed(report, "statistics"):
        report.gate(f"{prefix}ks_two_sample", ks_two_sample(y, fresh),
                    ks_critical_two_sample(y.size, fresh.size))
        if one_sample_tol is not None:
            report.gate(f"{prefix}ks_vs_{source}", ks_one_sample(y, cdf), one_sample_tol)
    return y, cdf


def _invariance_check(cfg: ExperimentConfig, report: Report):
    if cfg.map == "sech_map":
        forward = maps.sech_map
    else:
        forward, complex_map = _cauchy_map(cfg.map, cfg.pw)
        report.gate("fixed_point_defect", abs(complex_map(1j) - 1j), FIXED_POINT_TOL)
    y, cdf = _pushforward_gates(report, "", forward, cfg.source, cfg.seed, cfg.n,
                                cfg.workers, one_sample_tol=0.01)
    report.summary["quartiles"] = quantiles(y, [0.25, 0.5, 0.75])
    report.samples, report.reference_cdf = y, cdf


def _half_plane_fraction(complex_map, seed, count=10 ** 4):
    rng = RandomSource(seed, 2 ** 32)
    z = rng.generator.uniform(-10, 10, count) + 1j * rng.generator.uniform(1e-3, 10, count)
    return float(np.mean([complex_map(complex(w)).imag > 0 for w in z]))


def _pw_check(cfg: ExperimentConfig, report: Report):
    param_sets = {"params": cfg.pw} if cfg.pw is not None else {
        "boole": BOOLE_PARAMS, "mobius": MOBIUS_PARAMS}
    for label, p in param_sets.items():
        violations = maps.pw_validate(p)
        report.gate(f"{label}_violations", len(violations), 0, "<=",
                    note="; ".join(violations) or None)
        if violations:
            continue
        report.summary[f"{label}_normalizer"] = maps.pw_normalizer(p)
        forward, complex_map = _cauchy_map("pw", p)
        report.gate(f"{label}_fixed_point_defect", abs(complex_map(1j) - 1j), FIXED_POINT_TOL)
        frac = _half_plane_fraction(complex_map, cfg.seed)
        report.gate(f"{label}_half_plane_failures", 1.0 - frac, 0.0, "<=")
        _pushforward_gates(report, f"{label}_", forward, "cauchy", cfg.seed, cfg.n, cfg.workers)


def _cf_check(cfg: ExperimentConfig, report: Report):
    with _timed(report, "sample"):
        c = _draws(sample_cauchy, cfg.seed, cfg.n, cfg.workers)
        s = _draws(sample_sech, cfg.seed, cfg.n, cfg.workers, offset=cfg.workers)
    with _timed(report, "statistics"):
        for theta in (0.5, 1.0, 2.0):
            report.gate_abs_dev(f"cauchy_cf_theta_{theta}", empirical_cf(c, theta),
                                math.exp(-theta), CF_TOL)
            report.gate_abs_dev(f"sech_cf_theta_{theta}", empirical_cf(s, theta),
                                1.0 / math.cosh(theta), CF_TOL)
        y = maps.log_abs_map(c)
        for lam in (0.5, 1.0):
            cf = empirical_cf(y, lam)
            report.summary[f"log_abs_cf_lambda_{lam}"] = [cf.real, cf.imag]
            report.gate_abs_dev(f"log_abs_cf_lambda_{lam}", cf, 1.0 / math.cosh(lam), CF_TOL)
        report.gate("ks_log_abs_vs_sech", ks_one_sample(y, sech_cdf), 0.015)
        report.gate("ks_cauchy_sampler", ks_one_sample(c, cauchy_cdf), 0.01)
        report.gate("ks_sech_sampler", ks_one_sample(s, sech_cdf), 0.01)
    report.samples, report.reference_cdf = y, sech_cdf


_RUNNERS = {
    "exit-sim": _exit_sim,
    "orbit": _orbit,
    "invariance-check": _invariance_check,
    "pw-check": _pw_check,
    "cf-check": _cf_check,
}


def run_experiment(cfg: ExperimentConfig) -> Report:
    cfg = cfg.resolved()
    report = Report(config=cfg.echo())
    t0 = time.perf_counter()
    _RUNNERS[cfg.experiment](cfg, report)
    report.timings["total"] = time.perf_counter() - t0
    return report


# --------------------------------------------------------------------------
# output
# --------------------------------------------------------------------------

def report_json(report: Report, include_timings=True) -> str:
    return json.dumps(report.to_dict(include_timings), indent=2, sort_keys=True)


def emit(report: Report, fmt: str, path) -> None:
    """Write the report as JSON (everything) or CSV (one row per gate)."""
    if fmt == "json":
        with open(path, "w") as fh:
            fh.write(report_json(report) + "\n")
    elif fmt == "csv":
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["gate_name", "observed", "threshold", "pass"])
            for g in report.gates:
                writer.writerow([g.name, repr(g.observed), repr(g.threshold), g.passed])
    else:
        raise InvalidConfigError(f"unknown output format {fmt!r}")


def dump_samples(report: Report, path) -> None:
    """Sorted gated statistic with its ECDF and reference CDF, one row per sample."""
    e = EmpiricalDistribution(report.samples)
    x = e.samples
    ecdf = np.arange(1, x.size + 1) / x.size
    ref = np.asarray(report.reference_cdf(x), dtype=float)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["x", "ecdf", "reference_cdf"])
        for row in zip(x.tolist(), ecdf.tolist(), ref.tolist()):
            writer.writerow([repr(v) for v in row])


def load_report(path) -> Report:
    with open(path) as fh:
        return Report.from_dict(json.load(fh))


def default_seed() -> int:
    return int(os.environ.get(SEED_ENV, "0"))
