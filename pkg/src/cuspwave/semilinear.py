"""Picard fixed-point solvers for the semilinear problems.

Three shapes are covered, all sharing the same iteration engine:

* second order:  d_t^2 u - t^m Lap u = f(t, x, u)
* third order:   d_t (d_t^2 - t^m Lap) u = f(t, x, u), recast as the
  second-order equation with the nonlocal forcing phi2 + int_0^t f ds
* fourth order:  (d_t^2 - t^m1 Lap)(d_t^2 - t^m2 Lap) u = f(t, x, u),
  solved as a cascade of two second-order problems

Each nonlinearity evaluation happens pointwise in physical space with 2/3
dealiasing before the result re-enters the mode-wise linear solve.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from .errors import ConvergenceError, ParameterError
from .linear_solver import (
    cumulative_simpson,
    duhamel,
    solve_homogeneous,
    solve_inhomogeneous,
)
from .spectral import (
    Field,
    SpectralTrajectory,
    dealias,
    dft_forward,
    dft_inverse,
    require_same_grid,
    sobolev_norm,
)


@dataclass(frozen=True)
class NonlinearitySpec:
    """Pointwise source term f(t, x, u).

    kind "polynomial" carries coefficients c_k for sum c_k u^k; kind
    "tabulated-smooth" wraps an arbitrary callable (t, coords, u) -> array.
    growth_exponent is carried for diagnostics only.
    """

    kind: str = "polynomial"
    coefficients: tuple = ()
    evaluate_fn: object = None
    growth_exponent: float = 0.0

    def __post_init__(self):
        if self.kind not in ("polynomial", "tabulated-smooth"):
            raise ParameterError(f"unknown nonlinearity kind {self.kind!r}")
        if self.kind == "tabulated-smooth" and self.evaluate_fn is None:
            raise ParameterError("tabulated-smooth nonlinearity needs evaluate_fn")
        if self.growth_exponent < 0:
            raise ParameterError("growth exponent must be nonnegative")

    def evaluate(self, t, coords, u):
        if self.kind == "polynomial":
            out = np.zeros_like(u)
            for k, c in enumerate(self.coefficients):
                if c:
                    out = out + c * u**k
            return out
        return self.evaluate_fn(t, coords, u)

    def is_zero(self) -> bool:
        return self.kind == "polynomial" and not any(self.coefficients)


@dataclass(frozen=True)
class PicardConfig:
    T: float = 0.5
    n_t: int = 65
    max_iters: int = 40
    tol: float = 1e-10
    s_mon: float = 0.0

    def __post_init__(self):
        if not self.T > 0:
            raise ParameterError("horizon T must be positive")
        if self.n_t < 9 or self.n_t % 2 == 0:
            raise ParameterError("n_t must be odd and at least 9")
        if not self.tol > 0:
            raise ParameterError("tolerance must be positive")

    def times(self) -> np.ndarray:
        return np.linspace(0.0, self.T, self.n_t)


@dataclass
class PicardReport:
    iterate_distances: list = field(default_factory=list)
    contraction_ratio: float = float("nan")
    converged: bool = False
    iterations: int = 0
    wall_times: list = field(default_factory=list)

    def record(self, distance: float, wall: float) -> None:
        self.iterate_distances.append(distance)
        self.wall_times.append(wall)
        self.iterations += 1
        ds = self.iterate_distances
        ratios = [ds[i] / ds[i - 1] for i in range(2, len(ds)) if ds[i - 1] > 0]
        if ratios:
            self.contraction_ratio = max(ratios)

    def write_manifest(self, path) -> None:
        import csv

        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["iteration", "distance", "ratio", "wall_seconds"])
            prev = None
            for i, (d, wt) in enumerate(zip(self.iterate_distances, self.wall_times)):
                ratio = "" if not prev else repr(d / prev)
                w.writerow([i, repr(d), ratio, repr(wt)])
                prev = d


def _sup_norm_distance(a: SpectralTrajectory, b: SpectralTrajectory, s: float) -> float:
    return max(
        sobolev_norm(Field(a.grid, fa.values - fb.values, "spectral"), s)
        for fa, fb in zip(a.snapshots, b.snapshots)
    )


def _zero_trajectory(grid, times) -> SpectralTrajectory:
    z = [Field(grid, np.zeros(grid.sizes, dtype=complex), "spectral")
         for _ in times]
    return SpectralTrajectory(grid, times, list(z), list(z))


def evaluate_forcing(f: NonlinearitySpec, traj: SpectralTrajectory,
                     offset: SpectralTrajectory | None = None,
                     subtract_at_zero: bool = False) -> SpectralTrajectory:
    """Trajectory of f(t, x, u) snapshots, dealiased, in spectral space.

    With subtract_at_zero the value f(t, x, 0) is removed, which is the
    nonlinear increment the third-order fixed point iterates on.
    """
    grid = traj.grid
    coords = grid.coords()
    snaps = []
    for i, t in enumerate(traj.times):
        u = traj.snapshots[i].values
        if offset is not None:
            u = u + offset.snapshots[i].values
        u_phys = dft_inverse(Field(grid, u, "spectral")).values
        vals = f.evaluate(t, coords, u_phys)
        if subtract_at_zero:
            vals = vals - f.evaluate(t, coords, np.zeros_like(u_phys))
        snaps.append(dealias(dft_forward(Field(grid, vals))))
    z = [Field(grid, np.zeros(grid.sizes, dtype=complex), "spectral") for _ in traj.times]
    return SpectralTrajectory(grid, traj.times, snaps, z)


def _picard(apply_map, initial: SpectralTrajectory, cfg: PicardConfig):
    """Iterate w <- apply_map(w) until the monitored distance drops below tol."""
    report = PicardReport()
    w = initial
    for _ in range(cfg.max_iters):
        t0 = time.perf_counter()
        w_next = apply_map(w)
        dist = _sup_norm_distance(w_next, w, cfg.s_mon)
        report.record(dist, time.perf_counter() - t0)
        w = w_next
        if dist <= cfg.tol:
            report.converged = True
            break
    return w, report


def _superpose(a: SpectralTrajectory, *others) -> SpectralTrajectory:
    snaps = [f.values.copy() for f in a.snapshots]
    dts = [f.values.copy() for f in a.dt_snapshots]
    for b in others:
        for i in range(len(snaps)):
            snaps[i] += b.snapshots[i].values
            dts[i] += b.dt_snapshots[i].values
    return SpectralTrajectory(
        a.grid, a.times,
        [Field(a.grid, v, "spectral") for v in snaps],
        [Field(a.grid, v, "spectral") for v in dts],
    )


def solve_second_order(m: int, f: NonlinearitySpec, phi0: Field, phi1: Field,
                       cfg: PicardConfig):
    """Fixed point of w -> Duhamel(m, f(u_hom + w)) around the linear flow."""
    require_same_grid(phi0, phi1)
    times = cfg.times()
    u_hom = solve_homogeneous(m, phi0, phi1, times)
    if f.is_zero():
        report = PicardReport(converged=True, iterations=1, iterate_distances=[0.0],
                              wall_times=[0.0])
        return u_hom, report

    def step(w):
        return duhamel(m, evaluate_forcing(f, w, offset=u_hom))

    w, report = _picard(step, _zero_trajectory(u_hom.grid, times), cfg)
    return _superpose(u_hom, w), report


def apply_E(m: int, g: SpectralTrajectory) -> SpectralTrajectory:
    """Duhamel image of the running time integral of g.

    E(g)(t) solves d_t (d_t^2 - t^m Lap) v = g with zero data: first
    integrate g cumulatively in t, then apply the second-order kernel.
    """
    g_vals = np.stack([s.values for s in g.snapshots])
    big_g = cumulative_simpson(g_vals, x=g.times, axis=0)
    snaps = [Field(g.grid, big_g[i], "spectral") for i in range(len(g.times))]
    z = [Field(g.grid, np.zeros(g.grid.sizes, dtype=complex), "spectral")
         for _ in g.times]
    return duhamel(m, SpectralTrajectory(g.grid, g.times, snaps, z))


def solve_third_order(m: int, f: NonlinearitySpec, phi0: Field, phi1: Field,
                      phi2: Field, cfg: PicardConfig):
    """Solve d_t^2 u - t^m Lap u = phi2 + int_0^t f(s, x, u) ds.

    Splitting: u1 carries (phi0, phi1), u2 carries phi2 plus the
    u-independent part of the source, and w is the fixed point of
    w -> E(f(u1 + u2 + w) - f(., ., 0)).
    """
    require_same_grid(phi0, phi1, phi2)
    times = cfg.times()
    grid = phi0.grid
    u1 = solve_homogeneous(m, phi0, phi1, times)

    base = evaluate_forcing(f, _zero_trajectory(grid, times))
    base_vals = np.stack([s.values for s in base.snapshots])
    accum = cumulative_simpson(base_vals, x=times, axis=0)
    forcing2 = SpectralTrajectory(
        grid, times,
        [Field(grid, phi2.values + accum[i], "spectral") for i in range(len(times))],
        base.dt_snapshots,
    )
    u2 = duhamel(m, forcing2)
    background = _superpose(u1, u2)

    def step(w):
        return apply_E(m, evaluate_forcing(f, w, offset=background,
                                           subtract_at_zero=True))

    w, report = _picard(step, _zero_trajectory(grid, times), cfg)
    return _superpose(background, w), report


def solve_fourth_order(m1: int, m2: int, f: NonlinearitySpec,
                       psi0: Field, psi1: Field, psi2: Field, psi3: Field,
                       cfg: PicardConfig):
    """Solve the factored problem Q_{m1} Q_{m2} u = f(t, x, u).

    v1 is the homogeneous Q_{m1} flow of the data pair (psi2, psi3) seen by
    the outer factor; the iteration feeds v1 plus the Duhamel image of
    f(u) under Q_{m1} into an inhomogeneous Q_{m2} solve with (psi0, psi1).
    """
    if m1 == m2:
        raise ParameterError("the factored solver needs distinct orders m1 != m2")
    require_same_grid(psi0, psi1, psi2, psi3)
    times = cfg.times()
    grid = psi0.grid
    v1 = solve_homogeneous(m1, psi2, psi3, times)

    def step(u):
        v2 = duhamel(m1, evaluate_forcing(f, u))
        return solve_inhomogeneous(m2, psi0, psi1, _superpose(v1, v2))

    u, report = _picard(step, _zero_trajectory(grid, times), cfg)
    return u, report


def measure_contraction(step, w_a: SpectralTrajectory, w_b: SpectralTrajectory,
                        s_mon: float = 0.0) -> float:
    """||step(w_a) - step(w_b)|| / ||w_a - w_b|| in the monitoring norm."""
    den = _sup_norm_distance(w_a, w_b, s_mon)
    if den == 0.0:
        raise ConvergenceError("contraction ratio undefined for identical iterates")
    num = _sup_norm_distance(step(w_a), step(w_b), s_mon)
    return num / den


def require_converged(report: PicardReport) -> None:
    if not report.converged:
        raise ConvergenceError(
            f"Picard iteration did not converge in {report.iterations} steps "
            f"(last distance {report.iterate_distances[-1]:.3e}); "
            "shrink the horizon T and retry",
            report=report,
        )
