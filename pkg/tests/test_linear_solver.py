"""Linear Cauchy solver checked against the independent RK4 oracle and the
closed-form small-time rates of the fundamental pair."""

import numpy as np
import pytest
from cuspwave.errors import ParameterError, QuadratureError
from cuspwave.linear_solver import (
    cumulative_simpson,
    duhamel,
    export_trajectory,
    propagator_table,
    relative_l2_distance,
    rk4_oracle,
    solve_homogeneous,
    solve_inhomogeneous,
)
from cuspwave.propagator import sample_arrays
from cuspwave.spectral import Field, Grid, SpectralTrajectory, dft_forward


def gaussian_field(grid, width=0.5):
    (x,) = grid.coords()
    return dft_forward(Field(grid, np.exp(-((x / width) ** 2))))


def zero_field(grid):
    return Field(grid, np.zeros(grid.sizes, dtype=complex), "spectral")


def constant_forcing(grid, times, value=1.0):
    f = Field(grid, np.full(grid.sizes, 0j), "spectral")
    vals = np.zeros(grid.sizes, dtype=complex)
    vals[(0,) * grid.n] = value
    f = Field(grid, vals, "spectral")
    return SpectralTrajectory(grid, times, [f] * len(times), [zero_field(grid)] * len(times))


def test_homogeneous_zero_mode():
    g = Grid(1, (16,), 2.0)
    times = np.linspace(0, 1, 5)
    phi1 = zero_field(g)
    vals = np.zeros(16, dtype=complex)
    vals[0] = 2.0
    phi2 = Field(g, vals, "spectral")
    tr = solve_homogeneous(1, phi1, phi2, times)
    # V2(t, 0) = t so the zero mode is 2t
    for i, t in enumerate(times):
        assert tr.snapshots[i].values[0] == pytest.approx(2.0 * t)
        assert tr.dt_snapshots[i].values[0] == pytest.approx(2.0)
    tr2 = solve_homogeneous(1, phi2, phi1, times)
    for i in range(len(times)):
        assert tr2.snapshots[i].values[0] == pytest.approx(2.0)


def test_data_reproduced_at_zero():
    g = Grid(1, (64,), 4.0)
    phi1 = gaussian_field(g)
    phi2 = gaussian_field(g, 0.3)
    tr = solve_homogeneous(2, phi1, phi2, np.linspace(0, 1, 9))
    assert np.array_equal(tr.snapshots[0].values, phi1.values)
    assert np.array_equal(tr.dt_snapshots[0].values, phi2.values)


def test_duhamel_zero_mode_quadratic():
    g = Grid(1, (16,), 2.0)
    times = np.linspace(0, 1, 33)
    tr = duhamel(1, constant_forcing(g, times))
    # at xi = 0 the response to F=1 is t^2/2, and Simpson is exact on it
    for i, t in enumerate(times):
        assert tr.snapshots[i].values[0] == pytest.approx(t * t / 2, abs=1e-12)
        assert tr.dt_snapshots[i].values[0] == pytest.approx(t, abs=1e-12)


def test_duhamel_zero_forcing():
    g = Grid(1, (16,), 2.0)
    times = np.linspace(0, 1, 9)
    z = zero_field(g)
    tr = duhamel(2, SpectralTrajectory(g, times, [z] * 9, [z] * 9))
    for s in tr.snapshots:
        assert np.all(s.values == 0)


def test_duhamel_needs_three_points():
    g = Grid(1, (16,), 2.0)
    z = zero_field(g)
    with pytest.raises(QuadratureError):
        duhamel(1, SpectralTrajectory(g, [0.0, 1.0], [z, z], [z, z]))


@pytest.mark.parametrize("m", [1, 2])
def test_homogeneous_matches_rk4(m):
    g = Grid(1, (128,), 4.0)
    phi1 = gaussian_field(g)
    phi2 = gaussian_field(g, 0.7)
    times = np.linspace(0, 1, 65)
    spec_tr = solve_homogeneous(m, phi1, phi2, times)
    rk_tr = rk4_oracle(m, phi1, phi2, None, times)
    assert relative_l2_distance(spec_tr, rk_tr, 1.0) < 1e-6
    assert relative_l2_distance(spec_tr, rk_tr, 0.5) < 1e-6


def test_single_mode_forcing_matches_rk4():
    g = Grid(1, (64,), 4.0)
    times = np.linspace(0, 1, 257)
    vals = np.zeros(64, dtype=complex)
    vals[5] = 1.0
    f = Field(g, vals, "spectral")
    forcing = SpectralTrajectory(g, times, [f] * len(times),
                                 [zero_field(g)] * len(times))
    spec_tr = duhamel(1, forcing)
    rk_tr = rk4_oracle(1, zero_field(g), zero_field(g), forcing, times)
    assert relative_l2_distance(spec_tr, rk_tr, 1.0) < 1e-6


def test_inhomogeneous_superposition():
    g = Grid(1, (64,), 4.0)
    times = np.linspace(0, 1, 33)
    phi1, phi2 = gaussian_field(g), gaussian_field(g, 0.3)
    forcing = constant_forcing(g, times)
    full = solve_inhomogeneous(2, phi1, phi2, forcing)
    hom = solve_homogeneous(2, phi1, phi2, times)
    par = duhamel(2, forcing)
    for i in (0, 16, 32):
        assert np.allclose(full.snapshots[i].values,
                           hom.snapshots[i].values + par.snapshots[i].values)
    rk = rk4_oracle(2, phi1, phi2, forcing, times)
    assert relative_l2_distance(full, rk, 1.0) < 1e-6


def test_rk4_convergence_order():
    g = Grid(1, (8,), 2.0)
    vals = np.zeros(8, dtype=complex)
    vals[3] = 1.0
    phi1 = Field(g, vals, "spectral")
    times = np.array([0.0, 1.0])
    errs = []
    ref = rk4_oracle(1, phi1, zero_field(g), None, times, substeps=4096)
    for n in (64, 128, 256):
        tr = rk4_oracle(1, phi1, zero_field(g), None, times, substeps=n)
        errs.append(abs(tr.snapshots[-1].values[3] - ref.snapshots[-1].values[3]))
    order = np.log2(errs[0] / errs[1]), np.log2(errs[1] / errs[2])
    assert order[0] == pytest.approx(4.0, abs=0.2)
    assert order[1] == pytest.approx(4.0, abs=0.2)


def test_rk4_requires_uniform_times():
    g = Grid(1, (8,), 2.0)
    z = zero_field(g)
    with pytest.raises(ParameterError):
        rk4_oracle(1, z, z, None, np.array([0.0, 0.1, 0.5]))


@pytest.mark.parametrize("m,s1", [
    (1, 1.0 / 6.0), (1, 1.0 / 12.0), (2, 1.0 / 4.0), (2, 1.0 / 8.0),
])
def test_small_time_derivative_loss_rate(m, s1):
    # sup over rho of (1+rho^2)^(s1/2) |V1(t, rho)| behaves like
    # t^(-s1(m+2)/2); the sup concentrates at rho ~ t^(-(m+2)/2)
    ts = np.geomspace(1e-3, 1e-1, 25)
    ratios = []
    for t in ts:
        rho = np.geomspace(1e-1, 10.0, 400) * t ** (-(m + 2) / 2)
        v1, _, _, _ = sample_arrays(m, np.full_like(rho, t), rho)
        ratios.append(np.max((1 + rho**2) ** (s1 / 2) * np.abs(v1)))
    slope = np.polyfit(np.log(ts), np.log(ratios), 1)[0]
    expected = -s1 * (m + 2) / 2
    assert slope == pytest.approx(expected, rel=0.10)


@pytest.mark.parametrize("m", [1, 2])
def test_zero_data_gain_rate(m):
    # response to forcing that is marginally H^s gains p3 = 1/(m+2)
    # derivatives at the cost of the factor t^(2 - p3(m+2)/2) = t^(3/2)
    p3 = 1.0 / (m + 2)
    s = 0.0
    rho_max = 1e5
    rho = np.geomspace(1.0, rho_max, 1400)
    f_hat = (1.0 + rho**2) ** (-(2 * s + 1.02) / 4)
    # start where the turning-point frequency t^(-(m+2)/2) sits inside the
    # resolved band, otherwise the low-frequency t^2 behavior dominates
    t_lo = (0.1 * rho_max) ** (-2.0 / (m + 2))
    ts = np.geomspace(t_lo, 10 * t_lo, 12)
    norms = []
    for t in ts:
        tau = np.linspace(0.0, t, 257)
        v1, v2, _, _ = sample_arrays(m, tau[:, None], rho[None, :])
        i1 = cumulative_simpson(v1, x=tau, axis=0, initial=0.0)[-1]
        i2 = cumulative_simpson(v2, x=tau, axis=0, initial=0.0)[-1]
        u_hat = (v2[-1] * i1 - v1[-1] * i2) * f_hat
        w = (1 + rho**2) ** (s + p3)
        norms.append(np.sqrt(np.trapezoid(w * np.abs(u_hat) ** 2, rho)))
    slope = np.polyfit(np.log(ts), np.log(norms), 1)[0]
    expected = 2.0 - p3 * (m + 2) / 2
    assert slope == pytest.approx(expected, rel=0.15)


def test_propagator_table_cached():
    g = Grid(1, (32,), 2.0)
    times = np.linspace(0, 1, 9)
    a = propagator_table(1, times, g.xi_norm())
    b = propagator_table(1, times, g.xi_norm())
    assert a[0] is b[0]


def test_export_trajectory(tmp_path):
    g = Grid(1, (16,), 2.0)
    times = np.linspace(0, 1, 5)
    tr = solve_homogeneous(1, gaussian_field(g), zero_field(g), times)
    manifest = export_trajectory(tmp_path / "run", tr, s_list=(0.0, 1.0))
    rows = open(manifest).read().strip().splitlines()
    assert rows[0] == "time,file,h0.0,h1.0"
    assert len(rows) == 6
    from cuspwave.spectral import load_field
    f0 = load_field(tmp_path / "run" / "snapshot_00000.cwgrid", "spectral")
    assert np.array_equal(f0.values, tr.snapshots[0].values)
