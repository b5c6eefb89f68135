"""Exit points of planar Brownian motion from half-planes and the vertical strip.

Half-planes are sampled exactly: the first hitting time of the boundary line
from distance ``d`` has the law ``d**2 / Z1**2`` (reflection principle), and
the tangential coordinate is then Gaussian with that variance. No Cauchy
sampler is involved.

The strip is sampled with an Euler scheme plus a Brownian-bridge crossing
test after every interior-to-interior step.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, MaxStepsExceeded
from .samplers import RandomSource

UPPER_HALF_PLANE = "upper-half-plane"
STRIP = "strip"
RIGHT_HALF_PLANE = "right-half-plane"
DOMAIN_KINDS = (UPPER_HALF_PLANE, STRIP, RIGHT_HALF_PLANE)
DEFAULT_STARTS = {UPPER_HALF_PLANE: 1j, STRIP: 0j, RIGHT_HALF_PLANE: 1 + 0j}

MAX_DT = 1e-2
# crossings with probability below exp(-40) ~ 4e-18 per step are not tested
BRIDGE_CUTOFF = 40.0


@dataclass(frozen=True)
class _Line:
    # boundary line {coord == value}; the domain side is inward * (coord - value) > 0
    axis: str  # "re" or "im"
    value: float
    inward: float

    def distance(self, re, im):
        return self.inward * ((re if self.axis == "re" else im) - self.value)


@dataclass(frozen=True)
class DomainSpec:
    """One of the three domains, with its Brownian start point.

    The start may lie on the boundary (the path then exits immediately) but
    not outside the domain.
    """

    kind: str = UPPER_HALF_PLANE
    half_width: float = 1.0
    start: complex | None = None

    def __post_init__(self):
        if self.kind not in DOMAIN_KINDS:
            raise DomainError(f"unknown domain kind {self.kind!r}")
        if not self.half_width > 0:
            raise DomainError("strip half-width must be positive")
        start = DEFAULT_STARTS[self.kind] if self.start is None else complex(self.start)
        object.__setattr__(self, "start", start)
        if min(self.distances(start.real, start.imag)) < 0:
            raise DomainError(f"start point {start!r} lies outside the {self.kind}")

    @property
    def lines(self) -> tuple[_Line, ...]:
        if self.kind == UPPER_HALF_PLANE:
            return (_Line("im", 0.0, 1.0),)
        if self.kind == RIGHT_HALF_PLANE:
            return (_Line("re", 0.0, 1.0),)
        w = self.half_width
        return (_Line("re", -w, 1.0), _Line("re", w, -1.0))

    @property
    def is_half_plane(self) -> bool:
        return self.kind != STRIP

    def distances(self, re, im):
        return [line.distance(re, im) for line in self.lines]

    def default_max_steps(self, dt: float) -> int:
        return math.ceil(50.0 / dt)


@dataclass
class ExitSample:
    exit_point: complex
    domain: DomainSpec
    method: str
    step_size: float | None = None
    steps_taken: int = 0


@dataclass
class ExitBatch:
    """Exit points of many independent paths drawn from one stream.

    ``unexited`` counts Euler paths that hit ``max_steps``; they are left out
    of ``exit_points`` and must be reported by the caller.
    """

    domain: DomainSpec
    method: str
    exit_points: np.ndarray
    steps_taken: np.ndarray
    step_size: float | None = None
    unexited: int = 0

    def __len__(self):
        return self.exit_points.size

    def __iter__(self):
        for z, k in zip(self.exit_points, self.steps_taken):
            yield ExitSample(complex(z), self.domain, self.method, self.step_size, int(k))

    @classmethod
    def merge(cls, batches):
        batches = list(batches)
        first = batches[0]
        return cls(
            domain=first.domain,
            method=first.method,
            exit_points=np.concatenate([b.exit_points for b in batches]),
            steps_taken=np.concatenate([b.steps_taken for b in batches]),
            step_size=first.step_size,
            unexited=sum(b.unexited for b in batches),
        )


# --------------------------------------------------------------------------
# exact half-plane sampler
# --------------------------------------------------------------------------

def _require_half_plane(domain: DomainSpec):
    if not domain.is_half_plane:
        raise DomainError("the exact sampler only handles half-planes")


def exit_from_normals(domain: DomainSpec, z1, z2):
    """Map two independent standard normals to the half-plane exit point.

    The boundary is hit at time ``T = d**2 / z1**2`` and the tangential
    displacement by then is ``sqrt(T) * z2``.
    """
    _require_half_plane(domain)
    (line,) = domain.lines
    d = line.distance(domain.start.real, domain.start.imag)
    offset = d * np.asarray(z2, dtype=float) / np.abs(np.asarray(z1, dtype=float))
    if line.axis == "im":
        out = (domain.start.real + offset) + 0j
    else:
        out = 1j * (domain.start.imag + offset)
    return complex(out) if np.ndim(out) == 0 else out


def _nonzero_normals(rng: RandomSource, n: int):
    z1 = rng.normal(n)
    zero = z1 == 0.0
    while zero.any():
        z1[zero] = rng.normal(int(zero.sum()))
        zero = z1 == 0.0
    return z1


def sample_exit_exact(domain: DomainSpec, rng: RandomSource) -> ExitSample:
    _require_half_plane(domain)
    z1 = _nonzero_normals(rng, 1)[0]
    z2 = rng.normal()
    return ExitSample(exit_from_normals(domain, z1, z2), domain, "exact")


def sample_exits_exact(domain: DomainSpec, rng: RandomSource, n: int) -> ExitBatch:
    _require_half_plane(domain)
    z1 = _nonzero_normals(rng, n)
    z2 = rng.normal(n)
    return ExitBatch(domain, "exact", exit_from_normals(domain, z1, z2),
                     np.zeros(n, dtype=np.int64))


# --------------------------------------------------------------------------
# Euler scheme with Brownian-bridge crossing correction
# --------------------------------------------------------------------------

def _place(line: _Line, re, im):
    return complex(line.value, im) if line.axis == "re" else complex(re, line.value)


def _check_dt(dt):
    if not 0 < dt <= MAX_DT:
        raise ValueError(f"dt must lie in (0, {MAX_DT}], got {dt!r}")


def sample_exit_euler(domain: DomainSpec, dt: float, rng: RandomSource,
                      max_steps: int | None = None) -> ExitSample:
    """Simulate one path until it leaves the domain.

    After every step that stays inside, the path is declared to have crossed
    a boundary line in between with probability ``exp(-2 d_k d_{k+1} / dt)``
    (lines tested nearest first). On an overshoot the exit is the linear
    interpolation onto the crossed line; on a bridge crossing it is the
    projection of the step midpoint.
    """
    _check_dt(dt)
    if max_steps is None:
        max_steps = domain.default_max_steps(dt)
    lines = domain.lines
    re, im = domain.start.real, domain.start.imag
    d_old = domain.distances(re, im)
    for line, d in zip(lines, d_old):
        if d <= 0:
            return ExitSample(_place(line, re, im), domain, "euler", dt, 0)

    sd = math.sqrt(dt)
    chunk = 1024
    steps = 0
    while steps < max_steps:
        normals = rng.normal((chunk, 2)) * sd
        uniforms = rng.uniform_open(chunk)
        for (dre, dim), u in zip(normals, uniforms):
            steps += 1
            new_re, new_im = re + dre, im + dim
            d_new = domain.distances(new_re, new_im)
            j = min(range(len(lines)), key=d_new.__getitem__)
            if d_new[j] <= 0:
                s = d_old[j] / (d_old[j] - d_new[j])
                point = _place(lines[j], re + s * dre, im + s * dim)
                return ExitSample(point, domain, "euler", dt, steps)
            # sequential tests, nearest line first, driven by a single uniform
            survive = 1.0
            threshold = 0.0
            for k in sorted(range(len(lines)), key=d_old.__getitem__):
                p = math.exp(-2.0 * d_old[k] * d_new[k] / dt)
                threshold += survive * p
                survive *= 1.0 - p
                if u < threshold:
                    point = _place(lines[k], 0.5 * (re + new_re), 0.5 * (im + new_im))
                    return ExitSample(point, domain, "euler", dt, steps)
            re, im, d_old = new_re, new_im, d_new
            if steps >= max_steps:
                break
    raise MaxStepsExceeded(f"path did not exit within {max_steps} steps (dt={dt})")


def sample_exits_euler(domain: DomainSpec, dt: float, rng: RandomSource, n: int,
                       max_steps: int | None = None) -> ExitBatch:
    """Vectorized Euler scheme over ``n`` independent paths.

    Same scheme as :func:`sample_exit_euler`. All boundary lines of the three
    domains are perpendicular to one axis, so only the normal coordinate is
    stepped. The tangential coordinate is independent of the exit step and is
    drawn once per path at exit: its displacement is a sum of ``k - 1`` full
    increments plus the fraction ``c`` of the last one (``c = s`` on overshoot,
    ``1/2`` at a bridge crossing), i.e. Gaussian with variance
    ``(k - 1 + c**2) dt``.
    """
    _check_dt(dt)
    if max_steps is None:
        max_steps = domain.default_max_steps(dt)
    lines = domain.lines
    axis = lines[0].axis
    lo = max((ln.value for ln in lines if ln.inward > 0), default=-math.inf)
    hi = min((ln.value for ln in lines if ln.inward < 0), default=math.inf)
    start_normal = domain.start.real if axis == "re" else domain.start.imag
    start_tangent = domain.start.imag if axis == "re" else domain.start.real
    sd = math.sqrt(dt)

    exit_normal = np.empty(n)
    frac = np.zeros(n)  # c above; unused for step-0 exits
    steps_taken = np.zeros(n, dtype=np.int64)
    alive = np.arange(n)
    if start_normal <= lo or start_normal >= hi:
        exit_normal[:] = lo if start_normal <= lo else hi
        alive = alive[:0]
    x = np.full(alive.size, start_normal)

    step = 0
    while alive.size and step < max_steps:
        step += 1
        m = alive.size
        x_new = x + sd * rng.normal(m)
        d_lo, d_lo_new = x - lo, x_new - lo
        d_hi, d_hi_new = hi - x, hi - x_new
        over_lo = d_lo_new <= 0
        overshoot = over_lo | (d_hi_new <= 0)

        # bridge test only where the crossing probability exceeds exp(-BRIDGE_CUTOFF)
        prod_lo = d_lo * d_lo_new
        prod_hi = d_hi * d_hi_new
        cand = np.flatnonzero(~overshoot & (np.minimum(prod_lo, prod_hi) < BRIDGE_CUTOFF * dt / 2))
        bridge_lo = np.zeros(m, dtype=bool)
        bridge_hi = np.zeros(m, dtype=bool)
        if cand.size:
            u = rng.generator.random(cand.size)
            with np.errstate(under="ignore"):
                p_lo = np.exp(-2.0 * prod_lo[cand] / dt)
                p_hi = np.exp(-2.0 * prod_hi[cand] / dt)
            near_lo = d_lo[cand] <= d_hi[cand]
            p_near = np.where(near_lo, p_lo, p_hi)
            p_far = np.where(near_lo, p_hi, p_lo)
            cross_near = u < p_near
            cross_far = ~cross_near & (u < p_near + (1.0 - p_near) * p_far)
            bridge_lo[cand] = (cross_near & near_lo) | (cross_far & ~near_lo)
            bridge_hi[cand] = (cross_near & ~near_lo) | (cross_far & near_lo)
        with np.errstate(invalid="ignore", divide="ignore"):
            s = np.where(over_lo, d_lo / (d_lo - d_lo_new), d_hi / (d_hi - d_hi_new))

        exited = overshoot | bridge_lo | bridge_hi
        if exited.any():
            idx = alive[exited]
            hit_lo = (over_lo | bridge_lo)[exited]
            exit_normal[idx] = np.where(hit_lo, lo, hi)
            frac[idx] = np.where(overshoot[exited], s[exited], 0.5)
            steps_taken[idx] = step
            keep = ~exited
            alive = alive[keep]
            x = x_new[keep]
        else:
            x = x_new

    done = np.ones(n, dtype=bool)
    done[alive] = False
    k = steps_taken[done]
    var_steps = np.where(k > 0, k - 1 + frac[done] ** 2, 0.0)
    tangent = start_tangent + sd * np.sqrt(var_steps) * rng.normal(k.size)
    normal = exit_normal[done]
    points = normal + 1j * tangent if axis == "re" else tangent + 1j * normal
    return ExitBatch(domain, "euler", points, k, dt, unexited=int(alive.size))


# --------------------------------------------------------------------------
# strip exit decomposition
# --------------------------------------------------------------------------

def strip_exit_components(s: ExitSample) -> tuple[int, float]:
    """Split a strip exit into (side hit, height along the side)."""
    if s.domain.kind != STRIP:
        raise DomainError(f"expected a strip exit, got {s.domain.kind}")
    return (1 if s.exit_point.real > 0 else -1), s.exit_point.imag


def strip_components(batch: ExitBatch) -> tuple[np.ndarray, np.ndarray]:
    if batch.domain.kind != STRIP:
        raise DomainError(f"expected a strip exit batch, got {batch.domain.kind}")
    z = batch.exit_points
    return np.where(z.real > 0, 1, -1), z.imag
