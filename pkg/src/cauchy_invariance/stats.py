"""Reference CDFs, empirical distributions, KS distances and empirical CFs."""
from __future__ import annotations

import math

import numpy as np

from .errors import EmptySampleError

# Asymptotic Kolmogorov critical value at alpha = 0.001.
KS_CRIT_001 = 1.95


def ks_critical_one_sample(n: int) -> float:
    return KS_CRIT_001 / math.sqrt(n)


def ks_critical_two_sample(n1: int, n2: int | None = None) -> float:
    n2 = n1 if n2 is None else n2
    return KS_CRIT_001 * math.sqrt((n1 + n2) / (n1 * n2))


def cauchy_cdf(x):
    return 0.5 + np.arctan(x) / math.pi


def sech_cdf(y):
    """CDF of the density ``sech(pi y / 2) / 2``: ``(2/pi) arctan(exp(pi y / 2))``."""
    y = np.asarray(y, dtype=float)
    # evaluate through the negative half so exp never overflows
    lower = (2.0 / math.pi) * np.arctan(np.exp(-0.5 * math.pi * np.abs(y)))
    out = np.where(y <= 0.0, lower, 1.0 - lower)
    return float(out) if out.ndim == 0 else out


def sech_pdf(y):
    e = np.exp(-0.5 * math.pi * np.abs(np.asarray(y, dtype=float)))
    return e / (1.0 + e * e)


class EmpiricalDistribution:
    """Immutable sorted sample. Sorting happens once, at construction."""

    __slots__ = ("_x",)

    def __init__(self, samples):
        x = np.sort(np.asarray(samples, dtype=float).ravel())
        if x.size == 0:
            raise EmptySampleError("empirical distribution needs at least one sample")
        if np.isnan(x).any():
            raise ValueError("samples contain NaN")
        x.flags.writeable = False
        self._x = x

    @classmethod
    def merge(cls, parts):
        return cls(np.concatenate([np.asarray(p.samples if isinstance(p, cls) else p)
                                   for p in parts]))

    @property
    def samples(self) -> np.ndarray:
        return self._x

    @property
    def n(self) -> int:
        return self._x.size

    def __len__(self):
        return self._x.size

    def cdf(self, t):
        return np.searchsorted(self._x, t, side="right") / self._x.size

    def quantiles(self, levels):
        return quantiles(self, levels)

    def cf(self, theta):
        return empirical_cf(self, theta)

    def __repr__(self):
        return f"EmpiricalDistribution(n={self.n})"


def _as_empirical(e) -> EmpiricalDistribution:
    return e if isinstance(e, EmpiricalDistribution) else EmpiricalDistribution(e)


def ks_one_sample(e, cdf) -> float:
    """Kolmogorov distance between the empirical CDF and ``cdf``."""
    e = _as_empirical(e)
    n = e.n
    f = np.asarray(cdf(e.samples), dtype=float)
    i = np.arange(1, n + 1)
    return float(max(np.max(i / n - f), np.max(f - (i - 1) / n)))


def ks_two_sample(e1, e2) -> float:
    e1, e2 = _as_empirical(e1), _as_empirical(e2)
    support = np.concatenate([e1.samples, e2.samples])
    return float(np.max(np.abs(e1.cdf(support) - e2.cdf(support))))


def empirical_cf(e, theta: float) -> complex:
    """``mean(exp(i theta x))`` over the sample."""
    x = _as_empirical(e).samples
    return complex(np.mean(np.cos(theta * x)), np.mean(np.sin(theta * x)))


def quantiles(e, levels) -> list[float]:
    """Nearest-rank quantiles: the ``ceil(p n)``-th order statistic."""
    e = _as_empirical(e)
    levels = np.asarray(levels, dtype=float)
    if np.any((levels <= 0.0) | (levels >= 1.0)):
        raise ValueError("quantile levels must lie in the open interval (0, 1)")
    ranks = np.maximum(np.ceil(levels * e.n).astype(int), 1)
    return [float(v) for v in e.samples[ranks - 1]]


def correlation(x, y) -> float:
    """Pearson correlation; 0 when either variable is constant."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    xc = x - x.mean()
    yc = y - y.mean()
    denom = math.sqrt(float(xc @ xc) * float(yc @ yc))
    return float(xc @ yc) / denom if denom > 0 else 0.0
