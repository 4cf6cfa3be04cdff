"""Per-frequency fundamental pair of d_t^2 + t^m rho^2 on the Fourier side.

V1 and V2 are the solutions normalized to data (1, 0) and (0, 1) at t=0;
both are real combinations e^(-z/2) Phi(a, b; z) with the purely
imaginary argument z = (4i/(m+2)) t^((m+2)/2) rho.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, ParameterError
from .kummer import (
    kummer_m_array,
    kummer_m_dz_array,
    params_v1,
    params_v2,
)


@dataclass(frozen=True)
class PropagatorSample:
    """Fundamental pair and its time derivatives at one (m, t, rho)."""

    m: int
    t: float
    rho: float
    v1: complex
    v2: complex
    dt_v1: complex
    dt_v2: complex

    def wronskian(self) -> complex:
        return self.v1 * self.dt_v2 - self.v2 * self.dt_v1


def _check_args(m: int, t, rho) -> None:
    if not (isinstance(m, (int, np.integer)) and m >= 1):
        raise ParameterError(f"degeneracy order m must be a positive integer, got {m!r}")
    if np.any(np.asarray(t) < 0):
        raise DomainError("t must be nonnegative")
    if np.any(np.asarray(rho) < 0):
        raise DomainError("rho must be nonnegative")


def sample_arrays(m: int, t, rho):
    """Vectorised (v1, v2, dt_v1, dt_v2) over broadcastable t, rho arrays."""
    _check_args(m, t, rho)
    t = np.asarray(t, dtype=float)
    rho = np.asarray(rho, dtype=float)
    t, rho = np.broadcast_arrays(t, rho)

    p1 = params_v1(m)
    p2 = params_v2(m)
    half = 0.5 * (m + 2)
    z = (4j / (m + 2)) * t**half * rho
    dz_dt = 2j * t ** (0.5 * m) * rho

    phi1 = kummer_m_array(p1, z)
    phi2 = kummer_m_array(p2, z)
    dphi1 = kummer_m_dz_array(p1, z)
    dphi2 = kummer_m_dz_array(p2, z)

    damp = np.exp(-0.5 * z)
    v1 = damp * phi1
    v2 = t * damp * phi2
    dt_v1 = damp * (dphi1 - 0.5 * phi1) * dz_dt
    dt_v2 = damp * phi2 + t * damp * (dphi2 - 0.5 * phi2) * dz_dt

    # rho = 0 (or t = 0) degenerates to the exact pair (1, t)
    zero = z == 0
    if np.any(zero):
        v1 = np.where(zero, 1.0 + 0j, v1)
        v2 = np.where(zero, t + 0j, v2)
        dt_v1 = np.where(zero, 0j, dt_v1)
        dt_v2 = np.where(zero, 1.0 + 0j, dt_v2)
    return v1, v2, dt_v1, dt_v2


def sample(m: int, t: float, rho: float) -> PropagatorSample:
    """Evaluate the fundamental pair at a single point."""
    v1, v2, dt_v1, dt_v2 = sample_arrays(m, np.array(float(t)), np.array(float(rho)))
    return PropagatorSample(
        m=m,
        t=float(t),
        rho=float(rho),
        v1=complex(v1),
        v2=complex(v2),
        dt_v1=complex(dt_v1),
        dt_v2=complex(dt_v2),
    )


def ode_residual(m: int, t: float, rho: float, which: str = "v1") -> float:
    """|d_t^2 V + t^m rho^2 V| via a 5-point central stencil (diagnostic only)."""
    if which not in ("v1", "v2"):
        raise ParameterError(f"which must be 'v1' or 'v2', got {which!r}")
    _check_args(m, t, rho)
    h = 1e-4 * max(t, 1.0)
    if t - 2 * h <= 0:
        raise DomainError(f"t={t} too small for the finite-difference stencil (h={h})")
    ts = t + h * np.arange(-2.0, 3.0)
    v1, v2, _, _ = sample_arrays(m, ts, np.full(5, float(rho)))
    v = v1 if which == "v1" else v2
    d2 = (-v[0] + 16 * v[1] - 30 * v[2] + 16 * v[3] - v[4]) / (12 * h * h)
    return abs(d2 + t**m * rho**2 * v[2])
