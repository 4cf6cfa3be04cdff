"""Exact per-mode solvers for d_t^2 u - t^m Lap u = F on a periodic grid.

Every Fourier mode decouples into u'' + t^m rho^2 u = F_hat with rho = |xi|,
solved by the fundamental pair (V1, V2).  The particular solution uses the
variation-of-constants kernel V2(t)V1(tau) - V1(t)V2(tau) (the Wronskian is
one), evaluated with cumulative Simpson so a whole trajectory costs O(N_t).
"""

from __future__ import annotations

import csv

import numpy as np
from scipy.integrate import cumulative_simpson as _cumulative_simpson

from .errors import GridMismatchError, ParameterError, QuadratureError
from .propagator import sample_arrays
from .spectral import Field, SpectralTrajectory, require_same_grid, save_field, sobolev_norm


def _check_times(times) -> np.ndarray:
    times = np.asarray(times, dtype=float)
    if times.ndim != 1 or len(times) < 1 or times[0] != 0.0:
        raise ParameterError("times must be a 1-d array starting at 0")
    if np.any(np.diff(times) <= 0):
        raise ParameterError("times must be strictly increasing")
    return times


def cumulative_simpson(y, *, x, axis=0, initial=0.0):
    """Composite-Simpson running integral that is safe for complex input.

    scipy's implementation silently drops imaginary parts in one of its
    correction steps, so integrate real and imaginary parts separately.
    """
    y = np.asarray(y)
    if np.iscomplexobj(y):
        re = _cumulative_simpson(y.real, x=x, axis=axis, initial=initial)
        im = _cumulative_simpson(y.imag, x=x, axis=axis, initial=initial)
        return re + 1j * im
    return _cumulative_simpson(y, x=x, axis=axis, initial=initial)


_TABLE_CACHE = {}
_TABLE_CACHE_LIMIT = 8


def propagator_table(m: int, times, rho: np.ndarray):
    """(v1, v2, dt_v1, dt_v2) arrays of shape (n_times,) + rho.shape, cached.

    Picard iteration calls the linear solvers many times on one fixed
    (m, time grid, frequency set), so the table is memoised on those keys.
    """
    times = np.asarray(times, dtype=float)
    key = (m, times.tobytes(), rho.shape, rho.tobytes())
    hit = _TABLE_CACHE.get(key)
    if hit is not None:
        return hit
    t = times.reshape((-1,) + (1,) * rho.ndim)
    table = sample_arrays(m, t, rho[None, ...])
    if len(_TABLE_CACHE) >= _TABLE_CACHE_LIMIT:
        _TABLE_CACHE.pop(next(iter(_TABLE_CACHE)))
    _TABLE_CACHE[key] = table
    return table


def solve_homogeneous(m: int, phi1: Field, phi2: Field, times) -> SpectralTrajectory:
    """u_hat(t) = V1(t,|xi|) phi1_hat + V2(t,|xi|) phi2_hat per mode."""
    grid = require_same_grid(phi1, phi2)
    for f in (phi1, phi2):
        if f.space != "spectral":
            raise ParameterError("solve_homogeneous expects spectral data")
    times = _check_times(times)
    v1, v2, dt_v1, dt_v2 = propagator_table(m, times, grid.xi_norm())
    snaps, dts = [], []
    for i in range(len(times)):
        snaps.append(Field(grid, v1[i] * phi1.values + v2[i] * phi2.values, "spectral"))
        dts.append(Field(grid, dt_v1[i] * phi1.values + dt_v2[i] * phi2.values, "spectral"))
    return SpectralTrajectory(grid, times, snaps, dts)


def duhamel(m: int, forcing: SpectralTrajectory) -> SpectralTrajectory:
    """Zero-data response to the forcing trajectory.

    u_hat(t) = V2(t) I1(t) - V1(t) I2(t) with I1 = int_0^t V1 F_hat dtau and
    I2 = int_0^t V2 F_hat dtau; differentiating in t only hits the outer
    factors because the kernel vanishes on the diagonal.
    """
    times = _check_times(forcing.times)
    if len(times) < 3:
        raise QuadratureError("duhamel needs at least 3 time points for Simpson")
    grid = forcing.grid
    rho = grid.xi_norm()
    v1, v2, dt_v1, dt_v2 = propagator_table(m, times, rho)
    f_hat = np.stack([s.values for s in forcing.snapshots])
    i1 = cumulative_simpson(v1 * f_hat, x=times, axis=0, initial=0.0)
    i2 = cumulative_simpson(v2 * f_hat, x=times, axis=0, initial=0.0)
    snaps, dts = [], []
    for i in range(len(times)):
        snaps.append(Field(grid, v2[i] * i1[i] - v1[i] * i2[i], "spectral"))
        dts.append(Field(grid, dt_v2[i] * i1[i] - dt_v1[i] * i2[i], "spectral"))
    return SpectralTrajectory(grid, times, snaps, dts)


def solve_inhomogeneous(m: int, phi1: Field, phi2: Field,
                        forcing: SpectralTrajectory) -> SpectralTrajectory:
    hom = solve_homogeneous(m, phi1, phi2, forcing.times)
    par = duhamel(m, forcing)
    if hom.grid != par.grid:
        raise GridMismatchError("data and forcing grids differ")
    snaps = [Field(hom.grid, a.values + b.values, "spectral")
             for a, b in zip(hom.snapshots, par.snapshots)]
    dts = [Field(hom.grid, a.values + b.values, "spectral")
           for a, b in zip(hom.dt_snapshots, par.dt_snapshots)]
    return SpectralTrajectory(hom.grid, hom.times, snaps, dts)


def rk4_oracle(m: int, phi1: Field, phi2: Field,
               forcing: SpectralTrajectory | None, times,
               substeps: int | None = None) -> SpectralTrajectory:
    """Independent check: classical RK4 on (u, v)' = (v, -t^m rho^2 u + F).

    The forcing between stored samples is interpolated linearly in t.  The
    number of internal substeps per stored interval defaults to enough to
    resolve the fastest mode (period ~ 2 pi / (t^(m/2) rho_max)).
    """
    times = _check_times(times)
    if len(times) < 2:
        raise ParameterError("rk4_oracle needs at least two time points")
    h0 = np.diff(times)
    if np.max(np.abs(h0 - h0[0])) > 1e-12 * h0[0]:
        raise ParameterError("rk4_oracle requires uniform times")
    grid = phi1.grid
    require_same_grid(phi1, phi2)
    rho = grid.xi_norm()
    rho2 = rho * rho
    t_end = times[-1]
    omega_max = t_end ** (m / 2) * float(np.max(rho))
    if substeps is None:
        substeps = int(max(16, min(4096, 40 * omega_max * h0[0])))

    if forcing is not None:
        if forcing.grid != grid:
            raise GridMismatchError("forcing grid differs from data grid")
        f_times = forcing.times
        f_vals = np.stack([s.values for s in forcing.snapshots])

        def f_at(t):
            i = np.searchsorted(f_times, t) - 1
            i = min(max(i, 0), len(f_times) - 2)
            w = (t - f_times[i]) / (f_times[i + 1] - f_times[i])
            return (1 - w) * f_vals[i] + w * f_vals[i + 1]
    else:
        zero = np.zeros(grid.sizes, dtype=complex)

        def f_at(t):
            return zero

    u = phi1.values.astype(complex).copy()
    v = phi2.values.astype(complex).copy()
    snaps = [Field(grid, u.copy(), "spectral")]
    dts = [Field(grid, v.copy(), "spectral")]

    def acc(t, u):
        return -np.clip(t, 0.0, None) ** m * rho2 * u + f_at(t)

    for i in range(len(times) - 1):
        h = (times[i + 1] - times[i]) / substeps
        t = times[i]
        for _ in range(substeps):
            k1u, k1v = v, acc(t, u)
            k2u, k2v = v + h / 2 * k1v, acc(t + h / 2, u + h / 2 * k1u)
            k3u, k3v = v + h / 2 * k2v, acc(t + h / 2, u + h / 2 * k2u)
            k4u, k4v = v + h * k3v, acc(t + h, u + h * k3u)
            u = u + h / 6 * (k1u + 2 * k2u + 2 * k3u + k4u)
            v = v + h / 6 * (k1v + 2 * k2v + 2 * k3v + k4v)
            t += h
        snaps.append(Field(grid, u.copy(), "spectral"))
        dts.append(Field(grid, v.copy(), "spectral"))
    return SpectralTrajectory(grid, times, snaps, dts)


def relative_l2_distance(a: SpectralTrajectory, b: SpectralTrajectory, t: float) -> float:
    fa = a.snapshot_at(t).values
    fb = b.snapshot_at(t).values
    return float(np.linalg.norm(fa - fb) / max(np.linalg.norm(fb), 1e-300))


def export_trajectory(directory, traj: SpectralTrajectory, s_list=(0.0,)):
    """Write one grid file per snapshot plus a CSV manifest of H^s norms."""
    import os

    os.makedirs(directory, exist_ok=True)
    manifest = os.path.join(directory, "manifest.csv")
    with open(manifest, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["time", "file"] + [f"h{s}" for s in s_list])
        for i, t in enumerate(traj.times):
            name = f"snapshot_{i:05d}.cwgrid"
            save_field(os.path.join(directory, name), traj.snapshots[i])
            norms = [sobolev_norm(traj.snapshots[i], s) for s in s_list]
            w.writerow([repr(float(t)), name] + [repr(v) for v in norms])
    return manifest
