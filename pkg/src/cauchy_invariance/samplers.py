"""Reproducible random streams and exact inverse-CDF samplers."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

_TWO53 = float(2 ** 53)


@dataclass
class RandomSource:
    """One reproducible stream, keyed by ``(seed, stream_id)``.

    Streams with distinct ids come from independent children of the same
    ``numpy.random.SeedSequence``, driving a PCG64 generator each.
    """

    seed: int
    stream_id: int = 0
    generator: np.random.Generator = field(init=False, repr=False)

    def __post_init__(self):
        ss = np.random.SeedSequence(entropy=self.seed, spawn_key=(self.stream_id,))
        self.generator = np.random.Generator(np.random.PCG64(ss))

    def uniform_open(self, size=None):
        """Uniforms on the open interval (0, 1): ``(k + 1/2) / 2**53``."""
        k = self.generator.integers(0, 2 ** 53, size=size, dtype=np.int64)
        return (k + 0.5) / _TWO53

    def normal(self, size=None):
        return self.generator.standard_normal(size)


def spawn_stream(seed: int, stream_id: int) -> RandomSource:
    return RandomSource(seed, stream_id)


def spawn_streams(seed: int, count: int) -> list[RandomSource]:
    return [RandomSource(seed, k) for k in range(count)]


def cauchy_from_uniform(u):
    return np.tan(math.pi * (np.asarray(u) - 0.5))


def sech_from_uniform(u):
    """Inverse of the sech-law CDF, ``(2/pi) ln tan(pi u / 2)``.

    Written as ``(4/pi) artanh(tan(pi (u - 1/2) / 2))`` so that u = 1/2 maps
    exactly to 0 and the result is odd in ``u - 1/2``.
    """
    return (4.0 / math.pi) * np.arctanh(np.tan(0.5 * math.pi * (np.asarray(u) - 0.5)))


def _scalar_or_array(x, size):
    return float(x) if size is None else x


def sample_cauchy(rng: RandomSource, size=None):
    return _scalar_or_array(cauchy_from_uniform(rng.uniform_open(size)), size)


def sample_sech(rng: RandomSource, size=None):
    """Draws with density ``sech(pi y / 2) / 2``."""
    return _scalar_or_array(sech_from_uniform(rng.uniform_open(size)), size)


def split_counts(n: int, workers: int) -> list[int]:
    """Deterministic split of ``n`` draws over ``workers`` streams."""
    base, extra = divmod(n, workers)
    return [base + (1 if k < extra else 0) for k in range(workers)]
