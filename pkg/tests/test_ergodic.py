import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate

from cauchy_invariance.ergodic import (BOOLE, EXCEPTIONAL_SET, OBSERVABLE_LIMITS, OBSERVABLES,
                                       SIMPSON_NEWTON, OrbitConfig, birkhoff_average, orbit,
                                       orbit_empirical_law)
from cauchy_invariance.errors import InvalidStartError, OrbitTerminated
from cauchy_invariance.maps import INFINITY, BOOLE_PARAMS, boole, MOBIUS_PARAMS, PWParams
from cauchy_invariance.stats import cauchy_cdf, ks_one_sample


def cauchy_mean(f, lo=-np.inf, hi=np.inf):
    value, _ = integrate.quad(lambda t: f(t) / (math.pi * (1 + t * t)), lo, hi)
    return value


def test_observable_limits_by_quadrature():
    assert cauchy_mean(lambda t: 1 / (1 + t * t)) == pytest.approx(OBSERVABLE_LIMITS["inv1p2"],
                                                                   abs=1e-9)
    assert cauchy_mean(lambda t: 1.0, 0, 1) == pytest.approx(OBSERVABLE_LIMITS["unit_indicator"],
                                                             abs=1e-12)
    t = np.array([-0.5, 0.0, 0.5, 1.0, 1.5])
    assert OBSERVABLES["unit_indicator"](t).tolist() == [0, 1, 1, 1, 0]
    assert OBSERVABLES["inv1p2"](t) == pytest.approx(1 / (1 + t ** 2))


def test_boole_orbit_values():
    r = orbit(OrbitConfig(BOOLE, 2.0, 3))
    assert r.values.tolist() == [2.0, 0.75, 0.5 * (0.75 - 1 / 0.75)]
    assert r.values[2] == pytest.approx(-0.2916666666666667)
    assert not r.terminated_early


def test_boole_orbit_hits_exceptional_set():
    r = orbit(OrbitConfig(BOOLE, 1.0, 10))
    assert r.terminated_early and r.termination_step == 2
    assert r.reason == EXCEPTIONAL_SET
    assert r.values.tolist() == [1.0, 0.0]
    with pytest.raises(OrbitTerminated):
        birkhoff_average(OrbitConfig(BOOLE, 1.0, 10), OBSERVABLES["inv1p2"])
    with pytest.raises(OrbitTerminated):
        orbit_empirical_law(OrbitConfig(BOOLE, 1.0, 10))


def test_simpson_newton_orbit():
    assert orbit(OrbitConfig(SIMPSON_NEWTON, 1.0, 2)).values.tolist() == [1.0, -1.0]


@pytest.mark.parametrize("m, x0", [(BOOLE, 0.0), (SIMPSON_NEWTON, 1 / math.sqrt(3)),
                                   (SIMPSON_NEWTON, -1 / math.sqrt(3)), (MOBIUS_PARAMS, 1.0)])
def test_invalid_starts(m, x0):
    with pytest.raises(InvalidStartError):
        orbit(OrbitConfig(m, x0, 5))


def test_config_validation():
    with pytest.raises(ValueError):
        OrbitConfig(BOOLE, 2.0, 0)
    with pytest.raises(ValueError):
        OrbitConfig("secant", 2.0, 5)
    with pytest.raises(ValueError):
        OrbitConfig(BOOLE, 2.0, 5, pole_guard=0)
    with pytest.raises(ValueError):
        OrbitConfig(PWParams(1, -1), 2.0, 5)


def test_single_point_orbit():
    cfg = OrbitConfig(BOOLE, 2.0, 1)
    assert birkhoff_average(cfg, lambda t: t ** 2) == 4.0
    e = orbit_empirical_law(cfg)
    f = cauchy_cdf(2.0)
    assert ks_one_sample(e, cauchy_cdf) == pytest.approx(max(f, 1 - f))


def test_pw_orbit_matches_boole():
    a = orbit(OrbitConfig(BOOLE_PARAMS, 2.3, 50)).values
    b = orbit(OrbitConfig(BOOLE, 2.3, 50)).values
    assert np.allclose(a[:20], b[:20], rtol=1e-9)


def test_guard_fires_on_blowup():
    r = orbit(OrbitConfig(BOOLE, 2.0, 100, blowup_guard=5.0))
    assert r.terminated_early
    assert np.all(np.abs(r.values) < 5.0)
    assert abs(0.5 * (r.values[-1] - 1 / r.values[-1])) >= 5.0


@settings(max_examples=40, deadline=None)
@given(st.floats(0.01, 100), st.floats(1e2, 1e6))
def test_guard_soundness(x0, blowup):
    """Values strictly inside (pole_guard, blowup_guard) are never dropped."""
    expected = [x0]
    for _ in range(199):
        nxt = boole(expected[-1])
        if nxt is INFINITY or abs(nxt) >= blowup:
            break
        expected.append(nxt)
    r = orbit(OrbitConfig(BOOLE, x0, 200, blowup_guard=blowup, pole_guard=1e-300))
    assert r.values.tolist() == expected
    assert r.terminated_early == (len(expected) < 200)


def test_running_average():
    r = orbit(OrbitConfig(BOOLE, 2.0, 1000), {"inv1p2": OBSERVABLES["inv1p2"]})
    running = r.running_average(OBSERVABLES["inv1p2"])
    assert running[0] == pytest.approx(0.2)
    assert running[-1] == pytest.approx(r.birkhoff_values["inv1p2"])


@pytest.mark.parametrize("m", [BOOLE, SIMPSON_NEWTON])
def test_birkhoff_convergence_from_x0_2(m):
    cfg = OrbitConfig(m, 2.0, 10 ** 6)
    r = orbit(cfg, OBSERVABLES)
    assert abs(r.birkhoff_values["inv1p2"] - 0.5) <= 0.01
    assert abs(r.birkhoff_values["unit_indicator"] - 0.25) <= 0.01
    assert ks_one_sample(r.samples, cauchy_cdf) < 0.02


def test_birkhoff_random_starts():
    starts = np.random.default_rng(12345).uniform(1, 3, 10)
    good = 0
    for x0 in starts:
        r = orbit(OrbitConfig(BOOLE, float(x0), 10 ** 6), OBSERVABLES)
        good += (not r.terminated_early
                 and abs(r.birkhoff_values["inv1p2"] - 0.5) <= 0.01
                 and abs(r.birkhoff_values["unit_indicator"] - 0.25) <= 0.01)
    assert good >= 9
