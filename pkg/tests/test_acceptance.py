"""End-to-end acceptance checks.

Each test pins one quantitative property of the toolkit: propagator
normalization and ODE residuals, oscillatory-decay exponents, agreement
with an independent RK4 oracle, exactness of polynomial zero modes,
contraction of the fixed-point iteration, residuals of the factored
fourth-order solve, the cusp geometry of computed singular ridges, and
the exact operator catalog.
"""

import numpy as np
import pytest

from cuspwave.initial_data import (
    AngularTerm,
    BumpSpec,
    InitialDataSpec,
    heaviside_fourier_split,
    make_a2,
    make_smooth,
)
from cuspwave.kummer import KummerParams, kummer_m_array
from cuspwave.linear_solver import rk4_oracle, solve_homogeneous
from cuspwave.opalg import catalog_verify
from cuspwave.probe import (
    CharSurface,
    VectorFieldId,
    conormal_scan,
    fit_power_law,
    gradient_magnitude,
    ridge_extract,
    surface_distance,
)
from cuspwave.propagator import ode_residual, sample, sample_arrays
from cuspwave.semilinear import (
    NonlinearitySpec,
    PicardConfig,
    solve_fourth_order,
    solve_second_order,
    solve_third_order,
)
from cuspwave.spectral import (
    Field,
    Grid,
    dft_forward,
    dft_inverse,
    sobolev_norm,
    spectral_derivative,
)


def zero_field(grid):
    return Field(grid, np.zeros(grid.sizes, dtype=complex), "spectral")


def gaussian_bump(grid, width=0.8):
    spec = InitialDataSpec("smooth", smooth=BumpSpec(1.0, width))
    return dft_forward(make_smooth(spec, grid))


def jump_data(grid, amp=1.0, wl=1.2, wr=0.9):
    """Spectral transform of a sign-flipping Heaviside-type profile."""
    spec = InitialDataSpec("A1", left=BumpSpec(amp, wl),
                           right=BumpSpec(-amp, wr))
    even, hil = heaviside_fourier_split(spec, grid)
    return Field(grid, even.values + hil.values, "spectral")


NO_FORCING = NonlinearitySpec(kind="polynomial", coefficients=())


@pytest.fixture(scope="module")
def cusp_run():
    """Third-order homogeneous jump run per refinement level.

    The second-time-derivative slot carries an amplified jump so the
    stationary interface ridge at x = 0 registers next to the traveling
    cusp ridges.
    """
    cache = {}

    def build(N):
        if N not in cache:
            grid = Grid(1, (N,), np.pi)
            cfg = PicardConfig(T=1.0, n_t=129, max_iters=10, tol=1e-10,
                               s_mon=0.0)
            traj, _ = solve_third_order(
                1, NO_FORCING, jump_data(grid), zero_field(grid),
                jump_data(grid, amp=6.0), cfg)
            cache[N] = traj
        return cache[N]

    return build


# 1. normalization and Wronskian of the fundamental pair --------------------

def test_propagator_normalization_and_wronskian():
    for m in (1, 2, 3, 4):
        for rho in (0.0, 1.0, 8.0, 64.0):
            s = sample(m, 0.0, rho)
            assert abs(s.v1 - 1.0) <= 1e-10
            assert abs(s.v2) <= 1e-10
            assert abs(s.dt_v1) <= 1e-10
            assert abs(s.dt_v2 - 1.0) <= 1e-10
        for rho in (1.0, 8.0, 64.0):
            t = np.linspace(0.05, 2.0, 40)
            v1, v2, d1, d2 = sample_arrays(m, t, np.full_like(t, rho))
            assert np.abs(v1 * d2 - v2 * d1 - 1.0).max() <= 1e-9


# 2. finite-difference residual of the defining ODE -------------------------

@pytest.mark.parametrize("m", [1, 2, 3])
def test_propagator_ode_residual(m):
    for t in np.linspace(0.1, 2.0, 10):
        for rho in np.geomspace(0.25, 64.0, 10):
            for which in ("v1", "v2"):
                s = sample(m, t, rho)
                v = s.v1 if which == "v1" else s.v2
                scale = 1.0 + t**m * rho**2 * abs(v)
                assert ode_residual(m, t, rho, which) / scale <= 1e-6


# 3. oscillatory decay exponents of the confluent series --------------------

@pytest.mark.parametrize("a,b,expected", [(1 / 6, 1 / 3, 1 / 6),
                                          (5 / 6, 5 / 3, 5 / 6)])
def test_kummer_decay_exponent(a, b, expected):
    # window-RMS magnitudes average out the beat between the two
    # asymptotic branches, leaving the common power law
    centers = np.geomspace(1e2, 1e4 / 1.2, 36)
    rms = []
    for yc in centers:
        y = np.linspace(yc, 1.2 * yc, 400)
        vals = np.abs(kummer_m_array(KummerParams(a, b), 1j * y))
        rms.append(np.sqrt(np.mean(vals**2)))
    fit = fit_power_law(centers, np.array(rms))
    assert abs(fit.exponent + expected) / expected <= 0.05


# 4. spectral solve against the per-mode RK4 oracle -------------------------

@pytest.mark.parametrize("m", [1, 2])
@pytest.mark.parametrize("family", ["gaussian", "jump"])
def test_solver_matches_rk4_oracle(m, family):
    grid = Grid(1, (256,), np.pi)
    phi = gaussian_bump(grid, 0.7) if family == "gaussian" else jump_data(grid)
    times = np.linspace(0.0, 1.0, 257)
    spec_traj = solve_homogeneous(m, phi, zero_field(grid), times)
    oracle = rk4_oracle(m, phi, zero_field(grid), None, times)
    for i in (128, 256):
        diff = np.linalg.norm(spec_traj.snapshots[i].values
                              - oracle.snapshots[i].values)
        ref = np.linalg.norm(oracle.snapshots[i].values)
        assert diff / ref <= 1e-6


# 5. frequency-ring decay rate of the first propagator ----------------------

@pytest.mark.parametrize("m,s1,t_lo,t_hi", [(1, 1 / 6, 0.1, 0.6),
                                            (2, 1 / 4, 0.25, 1.0)])
def test_high_frequency_ring_rate(m, s1, t_lo, t_hi):
    grid = Grid(1, (2048,), np.pi)
    xi = grid.xi_norm()
    ring = Field(grid, ((np.abs(xi) >= 700) & (np.abs(xi) <= 900))
                 .astype(complex), "spectral")
    ts = np.geomspace(t_lo, t_hi, 17)
    traj = solve_homogeneous(m, ring, zero_field(grid),
                             np.concatenate(([0.0], ts)))
    norms = [sobolev_norm(traj.snapshots[i + 1], s1) for i in range(len(ts))]
    fit = fit_power_law(ts, norms)
    expected = -s1 * (m + 2) / 2
    assert abs(fit.exponent - expected) / abs(expected) <= 0.10


# 6. polynomial zero modes are reproduced exactly ---------------------------

def test_zero_mode_exactness():
    grid = Grid(1, (16,), np.pi)
    z = zero_field(grid)
    cfg = PicardConfig(T=1.0, n_t=129, max_iters=20, tol=1e-12, s_mon=0.0)
    f6 = NonlinearitySpec(kind="polynomial", coefficients=(6.0,))
    traj, _ = solve_third_order(1, f6, z, z, z, cfg)
    u0 = dft_inverse(traj.snapshots[-1]).values.real.mean()
    assert abs(u0 - 1.0) <= 1e-8  # u(t) = t^3 at t = 1
    f24 = NonlinearitySpec(kind="polynomial", coefficients=(24.0,))
    traj, _ = solve_fourth_order(2, 1, f24, z, z, z, z, cfg)
    u0 = dft_inverse(traj.snapshots[-1]).values.real.mean()
    assert abs(u0 - 1.0) <= 1e-7  # u(t) = t^4 at t = 1


# 7. fixed-point contraction shrinks with the horizon -----------------------

def test_picard_contraction_monotone_in_horizon():
    grid = Grid(1, (64,), np.pi)
    phi = gaussian_bump(grid)
    f = NonlinearitySpec(kind="polynomial", coefficients=(0.0, 0.0, 1.0))
    ratios = {}
    for T in (0.2, 0.4):
        cfg = PicardConfig(T=T, n_t=33, max_iters=30, tol=1e-12, s_mon=0.0)
        _, report = solve_second_order(1, f, phi, zero_field(grid), cfg)
        assert report.converged
        ratios[T] = report.contraction_ratio
    assert ratios[0.4] < 1.0
    assert ratios[0.2] < ratios[0.4]


# 8. composed-operator residual of the factored solve -----------------------

def test_fourth_order_factorization_residual():
    grid = Grid(1, (32,), np.pi)
    z = zero_field(grid)
    cfg = PicardConfig(T=1.0, n_t=257, max_iters=20, tol=1e-12, s_mon=0.0)
    f = NonlinearitySpec(kind="polynomial", coefficients=(3.0,))
    traj, _ = solve_fourth_order(2, 1, f, gaussian_bump(grid, 1.0),
                                 z, z, z, cfg)
    # even-index subsampling keeps the running-Simpson odd-point wiggle
    # out of the twice-differenced stencil
    U = np.stack([s.values for s in traj.snapshots])[::2]
    t = traj.times[::2]
    h = t[1] - t[0]
    xi2 = grid.xi_norm()**2

    def d2(A):
        return (-A[4:] + 16 * A[3:-1] - 30 * A[2:-2] + 16 * A[1:-3]
                - A[:-4]) / (12 * h * h)

    W = d2(U) + t[2:-2, None] * xi2[None, :] * U[2:-2]
    R = d2(W) + t[4:-4, None]**2 * xi2[None, :] * W[2:-2]
    fhat = np.zeros(grid.sizes[0], dtype=complex)
    fhat[0] = 3.0 * np.sqrt(grid.sizes[0])
    rel = np.linalg.norm(R - fhat[None, :], axis=1) / np.linalg.norm(fhat)
    assert rel.max() <= 1e-3


# 9. ridge geometry of the jump run -----------------------------------------

def test_ridge_positions_and_quiet_region(cusp_run):
    traj = cusp_run(1024)
    grid = traj.grid
    x = grid.axis_coords(0)
    dx = x[1] - x[0]
    points = [p for p in ridge_extract(traj, threshold=0.04)
              if abs(p[0] - 1.0) < 1e-12]
    for target in (-2.0 / 3.0, 0.0, 2.0 / 3.0):
        nearest = min(abs(p[1][0] - target) for p in points)
        assert nearest <= 2 * dx
    mag = gradient_magnitude(traj.snapshots[-1])
    surfaces = [CharSurface("GammaPM", m=1, sign="+"),
                CharSurface("GammaPM", m=1, sign="-"),
                CharSurface("Gamma0")]
    dist = np.min([[surface_distance(s, 1.0, [xi]) for xi in x]
                   for s in surfaces], axis=0)
    quiet = dist > 0.2
    assert mag[quiet].mean() <= 0.05 * mag.max()


# 10. cusp pair of the factored fourth-order run ----------------------------

def test_fourth_order_cusp_pair_ridges():
    grid = Grid(1, (1024,), np.pi)
    z = zero_field(grid)
    phi_a = jump_data(grid)
    phi_b = jump_data(grid, wl=1.1, wr=0.8)
    # superpose one homogeneous flow per factor: the slower-cusp branch
    # enters through the data slots (psi0 += phi_b, psi3 = lap phi_b)
    psi0 = Field(grid, phi_a.values + phi_b.values, "spectral")
    psi3 = Field(grid, -(grid.xi_norm()**2) * phi_b.values, "spectral")
    cfg = PicardConfig(T=1.0, n_t=129, max_iters=10, tol=1e-10, s_mon=0.0)
    traj, _ = solve_fourth_order(2, 1, NO_FORCING, psi0, z, z, psi3, cfg)
    dx = grid.axis_coords(0)[1] - grid.axis_coords(0)[0]
    points = [p for p in ridge_extract(traj, threshold=0.1)
              if abs(p[0] - 1.0) < 1e-12]
    for target in (-2.0 / 3.0, -0.5, 0.5, 2.0 / 3.0):
        nearest = min(abs(p[1][0] - target) for p in points)
        assert nearest <= 3 * dx


# 11. max-norm growth bounds near the degeneracy ----------------------------

def test_log_squared_bound_and_boundedness():
    ts = np.geomspace(1e-3, 1.0, 17)

    grid2 = Grid(2, (128, 128), np.pi)
    spec = InitialDataSpec("A2", radial=BumpSpec(1.0, 1.0),
                           angular=(AngularTerm(1, 1.0, 0.0),
                                    AngularTerm(3, 0.7, 0.4)))
    phi = dft_forward(make_a2(spec, grid2))
    traj = solve_homogeneous(1, phi, phi, np.concatenate(([0.0], ts)))
    maxes = np.array([np.abs(dft_inverse(traj.snapshots[i + 1]).values).max()
                      for i in range(len(ts))])
    data_max = np.abs(dft_inverse(phi).values).max()
    ratio = max(mx / (1.0 + abs(np.log(t)))**2 for t, mx in zip(ts, maxes))
    assert ratio <= 10.0 * data_max
    low = ts <= 0.1
    fit = fit_power_law(1.0 + np.abs(np.log(ts[low])), maxes[low])
    assert fit.exponent <= 2.2

    grid1 = Grid(1, (512,), np.pi)
    traj1 = solve_homogeneous(1, jump_data(grid1), zero_field(grid1),
                              np.concatenate(([0.0], ts)))
    maxes1 = [np.abs(dft_inverse(traj1.snapshots[i + 1]).values).max()
              for i in range(len(ts))]
    data_max1 = np.abs(dft_inverse(jump_data(grid1)).values).max()
    assert max(maxes1) <= 3.0 * data_max1


# 12. the exact operator catalog --------------------------------------------

@pytest.mark.parametrize("n", [1, 2])
def test_symbolic_catalog_all_orders(n):
    for m in range(1, 9):
        rows = catalog_verify(m, n, threads=4)
        control = [r for r in rows if r.expected == "nonzero"]
        assert control and all(r.ok for r in control)
        checked = [r for r in rows if r.expected == "zero"]
        bad = [r.name for r in checked if not r.ok]
        assert not bad, "m=%d n=%d failures: %s" % (m, n, bad)


@pytest.mark.parametrize("pair", [(2, 1), (3, 1), (4, 2)])
def test_symbolic_catalog_mixed_pairs(pair):
    for n in (1, 2):
        rows = catalog_verify(pair, n, threads=2)
        assert rows and all(r.ok for r in rows)


# 13. tangent words stay tame under refinement while a transverse
#     derivative blows up ---------------------------------------------------

def test_conormal_discriminator(cusp_run):
    s = 2.5
    tables, d11 = {}, {}
    for N in (512, 1024):
        traj = cusp_run(N)
        tables[N] = conormal_scan(traj, [VectorFieldId("V0", m=1)],
                                  depth=2, s=s)
        h = traj.times[1] - traj.times[0]
        keep = traj.times >= 4 * h
        d11[N] = max(
            sobolev_norm(spectral_derivative(
                spectral_derivative(traj.snapshots[i], 0), 0), s)
            for i in range(len(traj.times)) if keep[i])
    for word in tables[512]:
        assert tables[1024][word] / tables[512][word] < 50.0
    assert d11[1024] / d11[512] >= 10.0
