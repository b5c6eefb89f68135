"""Analytic maps that preserve the standard Cauchy law (and a sech-law analogue).

Real-valued maps act on the extended real line: a value is either a float or
the :data:`INFINITY` marker, and poles send their input to :data:`INFINITY`
instead of producing ``inf``/``nan``. Complex overloads raise
:class:`~cauchy_invariance.errors.PoleError` when the argument is within
:data:`POLE_TOL` of a pole.

The ``*_array`` variants are vectorized over numpy arrays and return masked
arrays with pole hits masked out.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Union

import numpy as np

from .errors import DomainError, InvalidParamsError, PoleError

POLE_TOL = 1e-12
CIRCLE_TOL = 1e-9
MAX_PW_TERMS = 1000
INV_SQRT3 = 1.0 / math.sqrt(3.0)
LN2 = math.log(2.0)


class _PointAtInfinity:
    """The single point added to the real line to close it up."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INFINITY"

    def __reduce__(self):
        return (_PointAtInfinity, ())


INFINITY = _PointAtInfinity()

ExtendedReal = Union[float, _PointAtInfinity]


def is_infinity(x) -> bool:
    return x is INFINITY


def _finite_or_infinity(value: float) -> ExtendedReal:
    return value if math.isfinite(value) else INFINITY


# --------------------------------------------------------------------------
# Boole transformation and the Simpson-Newton variant
# --------------------------------------------------------------------------

def boole(x: ExtendedReal) -> ExtendedReal:
    """Newton's map for x**2 + 1, ``(x - 1/x) / 2``, on the extended real line."""
    if x is INFINITY or abs(x) <= POLE_TOL:
        return INFINITY
    x = float(x)
    return _finite_or_infinity(0.5 * (x - 1.0 / x))


def boole_c(z: complex) -> complex:
    z = complex(z)
    if abs(z) <= POLE_TOL:
        raise PoleError(f"boole_c has a pole at 0 (z={z!r})")
    return 0.5 * (z - 1.0 / z)


def simpson_newton(x: ExtendedReal) -> ExtendedReal:
    """``(x**3 - 3x) / (3x**2 - 1)``; poles at +-1/sqrt(3) go to INFINITY."""
    if x is INFINITY or abs(abs(x) - INV_SQRT3) <= POLE_TOL:
        return INFINITY
    x = float(x)
    return _finite_or_infinity((x ** 3 - 3.0 * x) / (3.0 * x * x - 1.0))


def simpson_newton_c(z: complex) -> complex:
    z = complex(z)
    if abs(z - INV_SQRT3) <= POLE_TOL or abs(z + INV_SQRT3) <= POLE_TOL:
        raise PoleError(f"simpson_newton_c has a pole at +-1/sqrt(3) (z={z!r})")
    return (z ** 3 - 3.0 * z) / (3.0 * z * z - 1.0)


def _masked(values, poles):
    return np.ma.masked_array(values, mask=poles)


def boole_array(x) -> np.ma.MaskedArray:
    x = np.asarray(x)
    poles = np.abs(x) <= POLE_TOL
    with np.errstate(divide="ignore", invalid="ignore"):
        values = 0.5 * (x - 1.0 / x)
    return _masked(np.where(poles, 0.0, values), poles)


def simpson_newton_array(x) -> np.ma.MaskedArray:
    x = np.asarray(x)
    poles = (np.abs(x - INV_SQRT3) <= POLE_TOL) | (np.abs(x + INV_SQRT3) <= POLE_TOL)
    with np.errstate(divide="ignore", invalid="ignore"):
        values = (x ** 3 - 3.0 * x) / (3.0 * x * x - 1.0)
    return _masked(np.where(poles, 0.0, values), poles)


# --------------------------------------------------------------------------
# Cayley transform and the signed doubling map
# --------------------------------------------------------------------------

def cayley(z: complex) -> complex:
    """Upper half-plane -> unit disk, ``(i - z) / (i + z)``."""
    z = complex(z)
    if abs(z + 1j) <= POLE_TOL:
        raise PoleError("cayley has a pole at -i")
    return (1j - z) / (1j + z)


def inverse_cayley(w: complex) -> complex:
    """Unit disk -> upper half-plane, ``i (1 - w) / (1 + w)``."""
    w = complex(w)
    if abs(w + 1.0) <= POLE_TOL:
        raise PoleError("inverse_cayley has a pole at -1")
    return 1j * (1.0 - w) / (1.0 + w)


def doubling(w: complex) -> complex:
    w = complex(w)
    if abs(abs(w) - 1.0) > CIRCLE_TOL:
        raise DomainError(f"doubling expects a point on the unit circle, got |w|={abs(w)!r}")
    return -(w * w)


def conjugacy_defect(z: complex) -> float:
    """``|F(boole(G(z))) + z**2|``: how far the Cayley conjugate of the Boole
    map is from ``-z**2`` at ``z``."""
    z = complex(z)
    if abs(z) > 1.0 + CIRCLE_TOL:
        raise DomainError(f"conjugacy_defect expects |z| <= 1, got {abs(z)!r}")
    g = inverse_cayley(z)
    if abs(g) <= POLE_TOL:
        raise PoleError("inverse_cayley(z) is the pole of the Boole map (z = 1)")
    return abs(cayley(boole_c(g)) + z * z)


# --------------------------------------------------------------------------
# Pitman-Williams family
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class PWParams:
    """Constants of ``a z - b/z + sum_n [b_n/(a_n - z) - a_n b_n/(a_n**2 + 1)]``.

    Only finite term lists are supported. The infinite-sum case (with
    ``sum b_n / a_n**2 < inf`` and ``|a_n| -> inf``) is not representable.
    """

    a: float = 0.0
    b: float = 0.0
    terms: tuple = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "a", float(self.a))
        object.__setattr__(self, "b", float(self.b))
        object.__setattr__(
            self, "terms", tuple((float(an), float(bn)) for an, bn in self.terms)
        )

    @property
    def sign(self) -> int:
        """Common sign of the nonzero constants (0 if they are all zero or mixed)."""
        signs = {math.copysign(1, v) for v in self._constants() if v != 0.0}
        return int(signs.pop()) if len(signs) == 1 else 0

    def _constants(self):
        return [self.a, self.b] + [bn for _, bn in self.terms]

    @property
    def normalizer(self) -> float:
        return pw_normalizer(self)

    def poles(self) -> list:
        poles = [0.0] if self.b != 0.0 else []
        poles.extend(an for an, bn in self.terms if bn != 0.0)
        return poles


BOOLE_PARAMS = PWParams(0.5, 0.5)
MOBIUS_PARAMS = PWParams(0.0, 0.0, ((1.0, 1.0),))


def pw_validate(p: PWParams) -> list[str]:
    """Return the list of violated conditions; an empty list means valid."""
    violations = []
    values = [p.a, p.b] + [v for term in p.terms for v in term]
    if not all(math.isfinite(v) for v in values):
        violations.append("non-finite constant")
    if len(p.terms) > MAX_PW_TERMS:
        violations.append(f"more than {MAX_PW_TERMS} terms")
    for k, (an, _) in enumerate(p.terms):
        if an == 0.0:
            violations.append(f"a_n = 0 in term {k}")
    nonzero = [v for v in p._constants() if v != 0.0]
    if not nonzero:
        violations.append("all of a, b, b_n are zero")
    elif len({v > 0 for v in nonzero}) > 1:
        violations.append("mixed signs among nonzero a, b, b_n")
    if not violations:
        c = p.a + p.b + sum(bn / (an * an + 1.0) for an, bn in p.terms)
        if c == 0.0:
            violations.append("normalizer is zero")
    return violations


def _require_valid(p: PWParams):
    violations = pw_validate(p)
    if violations:
        raise InvalidParamsError("; ".join(violations))


def pw_normalizer(p: PWParams) -> float:
    _require_valid(p)
    return p.a + p.b + sum(bn / (an * an + 1.0) for an, bn in p.terms)


def _pw_raw(p: PWParams, z):
    value = p.a * z
    if p.b != 0.0:
        value = value - p.b / z
    for an, bn in p.terms:
        value = value + bn / (an - z) - an * bn / (an * an + 1.0)
    return value


def pw_eval(p: PWParams, z):
    """Evaluate the normalized map ``f(z) / c``.

    Real (or INFINITY) input returns an extended real; complex input returns
    a complex number and raises PoleError near a real pole.
    """
    c = pw_normalizer(p)
    if isinstance(z, complex):
        for pole in p.poles():
            if abs(z - pole) <= POLE_TOL:
                raise PoleError(f"pw_eval has a pole at {pole!r}")
        return _pw_raw(p, z) / c
    if z is INFINITY:
        if p.a != 0.0:
            return INFINITY
        return -sum(an * bn / (an * an + 1.0) for an, bn in p.terms) / c
    z = float(z)
    if any(abs(z - pole) <= POLE_TOL for pole in p.poles()):
        return INFINITY
    return _finite_or_infinity(_pw_raw(p, z) / c)


def pw_eval_array(p: PWParams, x) -> np.ma.MaskedArray:
    c = pw_normalizer(p)
    x = np.asarray(x)
    poles = np.zeros(x.shape, dtype=bool)
    for pole in p.poles():
        poles |= np.abs(x - pole) <= POLE_TOL
    with np.errstate(divide="ignore", invalid="ignore"):
        values = _pw_raw(p, x) / c
    return _masked(np.where(poles, 0.0, values), poles)


# --------------------------------------------------------------------------
# Strip automorphism and the sech-law maps
# --------------------------------------------------------------------------

HALF_PI = 0.5 * math.pi


def strip_automorphism(z):
    """Principal ``Log(cosh z)`` on the strip ``|Im z| < pi/2``.

    Real input gives the real value ``ln cosh x``.
    """
    if isinstance(z, complex):
        if not abs(z.imag) < HALF_PI:
            raise DomainError(f"strip_automorphism expects |Im z| < pi/2, got {z!r}")
        # Log cosh z = s z + Log(1 + exp(-2 s z)) - ln 2 with s = sign(Re z);
        # both imaginary parts stay in (-pi/2, pi/2) so no branch correction
        s = 1.0 if z.real >= 0.0 else -1.0
        return s * z + cmath.log(1.0 + cmath.exp(-2.0 * s * z)) - LN2
    x = abs(float(z))
    return x + math.log1p(math.exp(-2.0 * x)) - LN2


def _log_sinh(t):
    # t > 0; ln sinh t = t - ln 2 + log1p(-exp(-2t)) avoids overflow for large t
    t = np.atleast_1d(t)
    out = np.empty_like(t)
    large = t > 20.0
    out[~large] = np.log(np.sinh(t[~large]))
    out[large] = t[large] - LN2 + np.log1p(-np.exp(-2.0 * t[large]))
    return out


def sech_map(x):
    """``(2/pi) ln|sinh(pi x / 2)|``, which leaves the sech law invariant.

    Accepts a scalar or an array; zero is a log singularity.
    """
    arr = np.asarray(x, dtype=float)
    if np.any(arr == 0.0):
        raise DomainError("sech_map is singular at 0")
    out = (2.0 / math.pi) * _log_sinh(HALF_PI * np.abs(arr))
    return float(out[0]) if arr.ndim == 0 else out


def log_abs_map(x):
    """``(2/pi) ln|x|``; sends a standard Cauchy variate to the sech law."""
    arr = np.asarray(x, dtype=float)
    if np.any(arr == 0.0):
        raise DomainError("log_abs_map is singular at 0")
    out = (2.0 / math.pi) * np.log(np.abs(arr))
    return float(out) if out.ndim == 0 else out
