"""Confluent hypergeometric function Phi(a, b; z) for the propagator pairs.

Three evaluation regimes, switched on |z|:

* direct Taylor series for small |z| (fast, accurate while the terms do
  not grow large enough to cancel),
* the Euler integral representation evaluated with tanh-sinh quadrature
  for moderate |z| (requires 0 < a < b, which every parameter pair
  generated from the degeneracy order satisfies),
* the standard two-term large-argument expansion beyond ``Z_SWITCH``.

The parameters are exact rationals derived from an integer degeneracy
order, so parameter pairs are reproducible bit-exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.special import gamma as _gamma

from .errors import AccuracyError, DomainError, ParameterError

# Crossover radii.  The plain series keeps ~1e-12 relative accuracy up to
# |z| ~ 12 in double precision; between 12 and Z_SWITCH the quadrature
# path takes over; beyond Z_SWITCH the asymptotic expansion is used.
SERIES_RADIUS = 8.0
Z_SWITCH = 40.0

_SERIES_TOL = 1e-16
_SERIES_MAX_TERMS = 10_000
_ASYM_TERMS = 36
# tanh-sinh step and window; the window is sized so the endpoint tails of
# t^(a-1) are below 1e-16 for every a >= 1/6 in the propagator family
_TS_STEP = 0.05
_TS_WINDOW = 5.5


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, tuple):
        return Fraction(*x)
    return Fraction(x)


@dataclass(frozen=True)
class KummerParams:
    """Exact rational parameter pair (a, b) of Phi(a, b; z)."""

    a: Fraction
    b: Fraction

    def __post_init__(self):
        object.__setattr__(self, "a", _as_fraction(self.a))
        object.__setattr__(self, "b", _as_fraction(self.b))
        if self.b <= 0 and self.b.denominator == 1:
            raise ParameterError(
                f"b={self.b} is zero or a negative integer; series denominators vanish"
            )

    @property
    def af(self) -> float:
        return float(self.a)

    @property
    def bf(self) -> float:
        return float(self.b)


def params_v1(m: int) -> KummerParams:
    """Parameters of the first fundamental-pair factor for degeneracy order m."""
    return KummerParams(Fraction(m, 2 * (m + 2)), Fraction(m, m + 2))


def params_v2(m: int) -> KummerParams:
    """Parameters of the second fundamental-pair factor for degeneracy order m."""
    return KummerParams(Fraction(m + 4, 2 * (m + 2)), Fraction(m + 4, m + 2))


# ---------------------------------------------------------------------------
# evaluation regimes (vectorised over z)


def _series(a: float, b: float, z: np.ndarray) -> np.ndarray:
    """Taylor series sum_{n} (a)_n/(b)_n z^n/n!, term-recursive."""
    z = np.asarray(z, dtype=complex)
    total = np.ones_like(z)
    term = np.ones_like(z)
    prev_small = np.zeros(z.shape, dtype=bool)
    for n in range(_SERIES_MAX_TERMS):
        term = term * ((a + n) / (b + n)) * z / (n + 1)
        total = total + term
        small = np.abs(term) <= _SERIES_TOL * np.abs(total)
        if np.all(small & prev_small):
            return total
        prev_small = small
    raise AccuracyError(
        "Kummer series did not converge within the term cap",
        partial=total,
        terms=_SERIES_MAX_TERMS,
    )


_ts_cache: dict = {}


def _tanh_sinh_rule(a: float, b: float):
    """Nodes/weights for int_0^1 t^(a-1) (1-t)^(b-a-1) e^(zt) dt.

    The logistic forms for t and 1-t avoid subtractive cancellation at
    the endpoints, which the (1-t)^(b-a-1) factor would amplify.
    """
    key = (a, b)
    rule = _ts_cache.get(key)
    if rule is None:
        u = np.arange(-_TS_WINDOW, _TS_WINDOW + _TS_STEP / 2, _TS_STEP)
        x = 0.5 * np.pi * np.sinh(u)
        t = 1.0 / (1.0 + np.exp(-2.0 * x))
        omt = 1.0 / (1.0 + np.exp(2.0 * x))
        dt = 0.25 * np.pi * np.cosh(u) / np.cosh(x) ** 2
        prefactor = _gamma(b) / (_gamma(a) * _gamma(b - a))
        weights = prefactor * _TS_STEP * dt * t ** (a - 1.0) * omt ** (b - a - 1.0)
        rule = (t, weights)
        _ts_cache[key] = rule
    return rule


def _integral(a: float, b: float, z: np.ndarray) -> np.ndarray:
    """Euler integral representation, valid for 0 < a < b."""
    t, w = _tanh_sinh_rule(a, b)
    z = np.asarray(z, dtype=complex)
    return np.exp(np.multiply.outer(z, t)) @ w


def _asymptotic(a: float, b: float, z: np.ndarray) -> np.ndarray:
    """Two-term large-|z| expansion, summed to its numerically useful depth."""
    z = np.asarray(z, dtype=complex)
    # circular-sector sign: e^{+i pi a} for Im z >= 0, e^{-i pi a} below.
    sgn = np.where(np.imag(z) >= 0.0, 1.0, -1.0)
    s1 = np.ones_like(z)
    t1 = np.ones_like(z)
    s2 = np.ones_like(z)
    t2 = np.ones_like(z)
    for s in range(_ASYM_TERMS):
        t1 = t1 * (a + s) * (a - b + 1 + s) / ((s + 1) * (-z))
        t2 = t2 * (b - a + s) * (1 - a + s) / ((s + 1) * z)
        s1 = s1 + t1
        s2 = s2 + t2
    front1 = np.exp(1j * np.pi * a * sgn) * z ** (-a) / _gamma(b - a)
    front2 = np.exp(z) * z ** (a - b) / _gamma(a)
    return _gamma(b) * (front1 * s1 + front2 * s2)


def kummer_m_array(p: KummerParams, z: np.ndarray) -> np.ndarray:
    """Vectorised Phi(a, b; z) over an array of complex arguments."""
    a, b = p.af, p.bf
    z = np.asarray(z, dtype=complex)
    out = np.empty(z.shape, dtype=complex)
    az = np.abs(z)
    lo = az <= SERIES_RADIUS
    mid = (az > SERIES_RADIUS) & (az <= Z_SWITCH)
    hi = az > Z_SWITCH
    if np.any(lo):
        out[lo] = _series(a, b, z[lo])
    if np.any(mid):
        if 0.0 < a < b:
            out[mid] = _integral(a, b, z[mid])
        else:
            # outside the propagator parameter family; the series is the
            # only general fallback and may lose digits here
            out[mid] = _series(a, b, z[mid])
    if np.any(hi):
        out[hi] = _asymptotic(a, b, z[hi])
    return out


def kummer_m(p: KummerParams, z: complex) -> complex:
    """Phi(a, b; z) for a single complex argument."""
    if not np.isfinite(z):
        raise DomainError(f"non-finite argument {z!r}")
    return complex(kummer_m_array(p, np.array([z]))[0])


def kummer_m_dz_array(p: KummerParams, z: np.ndarray) -> np.ndarray:
    """d/dz Phi via the contiguous relation (a/b) Phi(a+1, b+1; z)."""
    shifted = KummerParams(p.a + 1, p.b + 1)
    return (p.af / p.bf) * kummer_m_array(shifted, z)


def kummer_m_dz(p: KummerParams, z: complex) -> complex:
    if not np.isfinite(z):
        raise DomainError(f"non-finite argument {z!r}")
    return complex(kummer_m_dz_array(p, np.array([z]))[0])


def asymptotic_magnitude(p: KummerParams, z: complex) -> float:
    """Leading-order |Phi| ~ C |z|^(-a) prediction for large |z|.

    C is the Gamma-ratio amplitude of the algebraically decaying term of
    the large-argument expansion.  Only meaningful on or near the
    imaginary axis, where the exponential-factor term carries the same
    algebraic decay rate and unit modulus.
    """
    az = abs(z)
    if az < Z_SWITCH:
        raise DomainError(
            f"|z|={az:.3g} below the asymptotic switch radius {Z_SWITCH}"
        )
    c = abs(_gamma(p.bf) / _gamma(p.bf - p.af))
    return c * az ** (-p.af)
