"""Orbits of the Boole map and its Simpson-Newton variant, and Birkhoff averages."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Union

import numpy as np

from . import maps
from .errors import InvalidStartError, OrbitTerminated
from .maps import INFINITY, PWParams
from .stats import EmpiricalDistribution

BOOLE = "boole"
SIMPSON_NEWTON = "simpson_newton"
EXCEPTIONAL_SET = "exceptional-set"


@dataclass(frozen=True)
class OrbitConfig:
    map: Union[str, PWParams] = BOOLE
    x0: float = 2.0
    length: int = 1000
    blowup_guard: float = 1e300
    pole_guard: float = 1e-300

    def __post_init__(self):
        if self.length < 1:
            raise ValueError("orbit length must be at least 1")
        if not (self.blowup_guard > 0 and self.pole_guard > 0):
            raise ValueError("guards must be positive")
        if isinstance(self.map, str) and self.map not in (BOOLE, SIMPSON_NEWTON):
            raise ValueError(f"unknown orbit map {self.map!r}")
        if isinstance(self.map, PWParams):
            maps.pw_normalizer(self.map)


def _step_and_poles(m):
    if m == BOOLE:
        return maps.boole, [0.0]
    if m == SIMPSON_NEWTON:
        return maps.simpson_newton, [-maps.INV_SQRT3, maps.INV_SQRT3]
    return (lambda x: maps.pw_eval(m, x)), m.poles()


# Observables with closed-form Cauchy space averages.
OBSERVABLES: dict[str, Callable] = {
    "inv1p2": lambda t: 1.0 / (1.0 + t * t),
    "unit_indicator": lambda t: ((t >= 0.0) & (t <= 1.0)).astype(float),
}
OBSERVABLE_LIMITS = {"inv1p2": 0.5, "unit_indicator": 0.25}


@dataclass
class OrbitResult:
    values: np.ndarray
    samples: EmpiricalDistribution
    birkhoff_values: dict = field(default_factory=dict)
    terminated_early: bool = False
    termination_step: int | None = None
    reason: str | None = None

    @property
    def length(self) -> int:
        return self.values.size

    def running_average(self, observable: Callable) -> np.ndarray:
        return np.cumsum(observable(self.values)) / np.arange(1, self.values.size + 1)

    def raise_if_terminated(self):
        if self.terminated_early:
            raise OrbitTerminated(self.termination_step, self.reason)


def orbit(cfg: OrbitConfig, observables: dict | None = None) -> OrbitResult:
    """Iterate the configured map ``cfg.length - 1`` times from ``x0``.

    Step ``k`` produces the ``k``-th iterate. If an iterate is the point at
    infinity or exceeds ``blowup_guard`` in magnitude, iteration stops and the
    result is flagged ``terminated_early`` at that step (the start lies, up
    to rounding, on the countable exceptional set). A value within
    ``pole_guard`` of a pole sends the next iterate to infinity.
    Observables, given as vectorized callables, are turned into running
    Birkhoff averages over the recorded values.
    """
    step_fn, poles = _step_and_poles(cfg.map)
    x = float(cfg.x0)
    if not math.isfinite(x) or step_fn(x) is INFINITY:
        raise InvalidStartError(f"x0={cfg.x0!r} is a pole of the {cfg.map} map")

    values = np.empty(cfg.length)
    values[0] = x
    terminated_at = None
    blowup, pole_guard = cfg.blowup_guard, cfg.pole_guard
    for k in range(1, cfg.length):
        if any(abs(x - p) < pole_guard for p in poles):
            nxt = INFINITY
        else:
            nxt = step_fn(x)
        if nxt is INFINITY or abs(nxt) >= blowup:
            terminated_at = k
            break
        x = nxt
        values[k] = x

    recorded = values if terminated_at is None else values[:terminated_at]
    result = OrbitResult(
        values=recorded,
        samples=EmpiricalDistribution(recorded),
        terminated_early=terminated_at is not None,
        termination_step=terminated_at,
        reason=EXCEPTIONAL_SET if terminated_at is not None else None,
    )
    for name, f in (observables or {}).items():
        result.birkhoff_values[name] = float(np.mean(f(recorded)))
    return result


def birkhoff_average(cfg: OrbitConfig, observable: Callable) -> float:
    """Time average of ``observable`` along the orbit; raises if it terminated."""
    result = orbit(cfg, {"f": observable})
    result.raise_if_terminated()
    return result.birkhoff_values["f"]


def orbit_empirical_law(cfg: OrbitConfig) -> EmpiricalDistribution:
    result = orbit(cfg)
    result.raise_if_terminated()
    return result.samples
