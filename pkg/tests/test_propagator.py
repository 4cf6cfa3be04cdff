"""Fundamental-pair sampler checked against two independent oracles:
a per-mode RK4 integration of u'' + t^m rho^2 u = 0 and the Bessel-J
closed form for V1."""

import numpy as np
import pytest
from scipy.special import gamma, jv

from cuspwave.errors import DomainError, ParameterError
from cuspwave.propagator import PropagatorSample, ode_residual, sample, sample_arrays


def rk4_pair(m, t_end, rho, n_steps=20000):
    """Integrate the pair ODE from 0 with classical RK4; returns V1, V2, dots."""

    def rhs(t, y):
        u1, du1, u2, du2 = y
        acc = -(t**m) * rho * rho
        return np.array([du1, acc * u1, du2, acc * u2])

    y = np.array([1.0, 0.0, 0.0, 1.0])
    h = t_end / n_steps
    t = 0.0
    for _ in range(n_steps):
        k1 = rhs(t, y)
        k2 = rhs(t + h / 2, y + h / 2 * k1)
        k3 = rhs(t + h / 2, y + h / 2 * k2)
        k4 = rhs(t + h, y + h * k3)
        y = y + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        t += h
    return y


CASES = [(1, 0.8, 4.0), (2, 0.5, 10.0), (3, 1.2, 3.0), (5, 0.9, 6.0)]


@pytest.mark.parametrize("m,t,rho", CASES)
def test_against_rk4(m, t, rho):
    s = sample(m, t, rho)
    v1, dv1, v2, dv2 = rk4_pair(m, t, rho)
    assert s.v1.real == pytest.approx(v1, abs=2e-8)
    assert s.v2.real == pytest.approx(v2, abs=2e-8)
    assert s.dt_v1.real == pytest.approx(dv1, abs=2e-7)
    assert s.dt_v2.real == pytest.approx(dv2, abs=2e-7)


@pytest.mark.parametrize("m", [1, 2, 3, 4, 6])
def test_bessel_identity(m):
    # V1(t, rho) = Gamma(1 - nu) (w/2)^nu J_{-nu}(w), nu = 1/(m+2),
    # w = (2/(m+2)) t^((m+2)/2) rho
    nu = 1.0 / (m + 2)
    for t, rho in [(0.4, 2.0), (1.0, 15.0), (0.3, 120.0)]:
        w = 2.0 / (m + 2) * t ** ((m + 2) / 2) * rho
        ref = gamma(1 - nu) * (w / 2) ** nu * jv(-nu, w)
        s = sample(m, t, rho)
        assert s.v1.real == pytest.approx(ref, rel=1e-9, abs=1e-9)
        assert abs(s.v1.imag) < 1e-10 * max(1.0, abs(ref))


def test_wronskian_normalisation():
    rng = np.random.default_rng(7)
    for m in (1, 2, 4):
        for _ in range(20):
            t = rng.uniform(0.05, 2.0)
            rho = rng.uniform(0.0, 200.0)
            w = sample(m, t, rho).wronskian()
            assert abs(w - 1.0) < 5e-9, (m, t, rho, w)


def test_degenerate_points():
    s = sample(3, 0.0, 9.0)
    assert (s.v1, s.v2, s.dt_v1, s.dt_v2) == (1.0, 0.0, 0.0, 1.0)
    s = sample(2, 1.7, 0.0)
    assert s.v1 == 1.0 and s.v2 == pytest.approx(1.7) and s.dt_v2 == 1.0


def test_vectorised_shapes_and_agreement():
    m = 2
    t = np.linspace(0.0, 1.0, 7)[:, None]
    rho = np.array([0.0, 3.0, 40.0])[None, :]
    v1, v2, dt_v1, dt_v2 = sample_arrays(m, t, rho)
    assert v1.shape == (7, 3)
    s = sample(m, float(t[4, 0]), float(rho[0, 2]))
    assert v1[4, 2] == pytest.approx(s.v1, rel=1e-14)
    assert dt_v2[4, 2] == pytest.approx(s.dt_v2, rel=1e-14)


def test_large_frequency_decay():
    # |V1| decays like (t^((m+2)/2) rho)^(-m/(2(m+2))); fit the exponent
    m = 2
    t = 1.0
    rhos = np.geomspace(1e4, 1e7, 5000)
    v1, _, _, _ = sample_arrays(m, np.full_like(rhos, t), rhos)
    mag = np.abs(v1)
    # RMS over log-spaced bins averages out the cosine oscillation
    nb = 30
    edges = np.linspace(np.log(rhos[0]), np.log(rhos[-1]), nb + 1)
    idx = np.digitize(np.log(rhos), edges) - 1
    lx, ly = [], []
    for b in range(nb):
        sel = idx == b
        if sel.sum() > 3:
            lx.append(np.log(rhos[sel]).mean())
            ly.append(0.5 * np.log((mag[sel] ** 2).mean()))
    slope = np.polyfit(lx, ly, 1)[0]
    assert slope == pytest.approx(-m / (2 * (m + 2)), abs=0.02)


def test_ode_residual_diagnostic():
    assert ode_residual(1, 0.6, 8.0, "v1") < 1e-5
    assert ode_residual(4, 1.1, 3.0, "v2") < 1e-5
    with pytest.raises(DomainError):
        ode_residual(1, 1e-6, 1.0)
    with pytest.raises(ParameterError):
        ode_residual(1, 0.5, 1.0, "v3")


def test_argument_validation():
    with pytest.raises(ParameterError):
        sample(0, 0.5, 1.0)
    with pytest.raises(DomainError):
        sample(1, -0.5, 1.0)
    with pytest.raises(DomainError):
        sample(1, 0.5, -1.0)
