import math

import numpy as np
import pytest

from cauchy_invariance.samplers import (RandomSource, cauchy_from_uniform, sample_cauchy,
                                        sample_sech, sech_from_uniform, spawn_stream,
                                        spawn_streams, split_counts)
from cauchy_invariance.stats import (cauchy_cdf, empirical_cf, ks_critical_two_sample,
                                     ks_one_sample, ks_two_sample, sech_cdf)

N = 10 ** 5


@pytest.fixture(scope="module")
def cauchy_draws():
    return sample_cauchy(RandomSource(2024), size=N)


@pytest.fixture(scope="module")
def sech_draws():
    return sample_sech(RandomSource(2024, 1), size=N)


def test_uniform_open_interval():
    u = RandomSource(1).uniform_open(10 ** 6)
    assert u.min() > 0 and u.max() < 1


def test_scalar_draws():
    rng = RandomSource(9)
    assert isinstance(sample_cauchy(rng), float)
    assert isinstance(sample_sech(rng), float)


def test_cauchy_sampler(cauchy_draws):
    assert abs(np.mean(cauchy_draws <= 1) - 0.75) < 0.005
    assert abs(np.median(cauchy_draws)) < 0.02
    assert abs(abs(empirical_cf(cauchy_draws, 1.0)) - math.exp(-1)) < 0.01
    assert ks_one_sample(cauchy_draws, cauchy_cdf) < 0.01


def test_cauchy_sampler_against_ratio_of_normals(cauchy_draws):
    z = RandomSource(77).normal((2, N))
    ratio = z[0] / z[1]
    assert ks_two_sample(cauchy_draws, ratio) < ks_critical_two_sample(N)


def test_sech_sampler(sech_draws):
    assert sech_from_uniform(0.5) == 0.0
    assert abs(np.mean(sech_draws <= 0) - 0.5) < 0.005
    # sech(1) = 2/(e + 1/e)
    assert abs(empirical_cf(sech_draws, 1.0) - 0.648054273663885) < 0.01
    assert ks_one_sample(sech_draws, sech_cdf) < 0.01


def test_inverse_cdfs_round_trip():
    u = np.linspace(0.001, 0.999, 999)
    assert np.allclose(cauchy_cdf(cauchy_from_uniform(u)), u, atol=1e-13)
    assert np.allclose(sech_cdf(sech_from_uniform(u)), u, atol=1e-13)


def test_stream_determinism():
    a = spawn_stream(7, 0).uniform_open(1000)
    b = spawn_stream(7, 0).uniform_open(1000)
    assert a.tobytes() == b.tobytes()
    c = spawn_stream(7, 1).uniform_open(1000)
    assert not np.array_equal(a, c)


def test_merged_streams_pass_ks():
    merged = np.concatenate([sample_cauchy(r, size=25_000) for r in spawn_streams(7, 4)])
    single = sample_cauchy(spawn_stream(7, 0), size=N)
    for x in (merged, single):
        assert ks_one_sample(x, cauchy_cdf) < 0.01


def test_split_counts():
    assert split_counts(10, 3) == [4, 3, 3]
    assert sum(split_counts(N, 7)) == N
