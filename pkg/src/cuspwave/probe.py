"""Singular-support diagnostics: characteristic-surface geometry, discrete
tangent vector fields, conormal-norm scans, gradient-ridge extraction, and
power-law rate fitting.
"""

from __future__ import annotations

import csv
import itertools
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, ParameterError
from .spectral import (
    Field,
    SpectralTrajectory,
    dft_forward,
    dft_inverse,
    sobolev_norm,
    spectral_derivative,
)

# characteristic sets -------------------------------------------------------


@dataclass(frozen=True)
class CharSurface:
    """Cusp-forming characteristic sets of the degenerate operator.

    GammaPM: x1 = +/- 2 t^((m+2)/2) / (m+2)      (half-space jump geometry)
    Gamma:   |x| = 2 t^((m+2)/2) / (m+2)          (point-singularity cone)
    Gamma0:  x1 = 0;  L0: x = 0;  Sigma0: t = 0
    """

    kind: str
    m: int = 1
    sign: str = "n/a"

    def __post_init__(self):
        if self.kind not in ("GammaPM", "Gamma", "Gamma0", "L0", "Sigma0"):
            raise ParameterError(f"unknown surface kind {self.kind!r}")
        if self.kind == "GammaPM":
            if self.sign not in ("+", "-"):
                raise ParameterError("GammaPM needs sign '+' or '-'")
        elif self.sign != "n/a":
            raise ParameterError(f"{self.kind} does not take a sign")
        if self.kind in ("GammaPM", "Gamma") and self.m < 1:
            raise ParameterError("m must be a positive integer")

    def radius(self, t) -> np.ndarray:
        """The cusp radius 2 t^((m+2)/2) / (m+2)."""
        return 2.0 * np.asarray(t, dtype=float) ** ((self.m + 2) / 2) / (self.m + 2)


def surface_distance(s: CharSurface, t, x) -> float:
    """Defining-function residual of the surface at the point (t, x)."""
    if np.any(np.asarray(t) < 0):
        raise DomainError("surface_distance needs t >= 0")
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if s.kind == "GammaPM":
        sgn = 1.0 if s.sign == "+" else -1.0
        return float(np.abs(x[0] - sgn * s.radius(t)))
    if s.kind == "Gamma":
        return float(np.abs(np.linalg.norm(x) - s.radius(t)))
    if s.kind == "Gamma0":
        return float(np.abs(x[0]))
    if s.kind == "L0":
        return float(np.linalg.norm(x))
    return float(t)  # Sigma0


# vector fields -------------------------------------------------------------

_FIELD_ARITY = {
    "V0": 0, "Vbar": 1, "L": 2, "Vhalf": 0, "TDt": 0, "Rl": 1,
    "N1": 0, "N2": 1, "N3": 0, "N4": 0,
}


@dataclass(frozen=True)
class VectorFieldId:
    """One member of the tangent-field alphabet.

    V0    = 2t dt + (m+2) sum_i x_i d_i        (radial scaling field)
    Vbar  = 2 t^(m/2+1) d_l + (m+2) x_l t^(-m/2) dt
    L     = x_i d_j - x_j d_i                   (rotation)
    Vhalf = 2t dt + (m+2) x1 d1                 (half-space scaling field)
    TDt   = t dt;  Rl = d_l
    N1    = x1 dt;  N2 = (x1 -/+ 2 t^((m+2)/2)/(m+2)) d1 (index +1/-1)
    N3    = t dt;   N4 = t^((m+2)/2) d1
    """

    name: str
    indices: tuple = ()
    m: int = 1

    def __post_init__(self):
        if self.name not in _FIELD_ARITY:
            raise ParameterError(f"unknown vector field {self.name!r}")
        object.__setattr__(self, "indices", tuple(self.indices))
        if len(self.indices) != _FIELD_ARITY[self.name]:
            raise ParameterError(
                f"{self.name} takes {_FIELD_ARITY[self.name]} indices, "
                f"got {len(self.indices)}"
            )
        if self.name == "L" and self.indices[0] == self.indices[1]:
            raise ParameterError("L needs two distinct axes")
        if self.name == "N2" and self.indices[0] not in (1, -1):
            raise ParameterError("N2 index is the branch sign +1 or -1")
        if self.m < 1:
            raise ParameterError("m must be a positive integer")

    @property
    def singular_at_zero(self) -> bool:
        return self.name == "Vbar"

    def label(self) -> str:
        idx = ",".join(str(i) for i in self.indices)
        return f"{self.name}[{idx}]" if idx else self.name

    def terms(self, n: int):
        """List of (coefficient(t, coords) -> array, slot) with slot either
        an axis index or 't'."""
        m = self.m
        if self.name == "V0":
            return [(lambda t, c: 2.0 * t, "t")] + [
                (lambda t, c, i=i: (m + 2) * c[i], i) for i in range(n)
            ]
        if self.name == "Vbar":
            l = self.indices[0]
            if not 0 <= l < n:
                raise ParameterError(f"Vbar axis {l} out of range for n={n}")
            return [
                (lambda t, c: 2.0 * t ** (m / 2 + 1), l),
                (lambda t, c: (m + 2) * c[l] * t ** (-m / 2), "t"),
            ]
        if self.name == "L":
            i, j = self.indices
            if not (0 <= i < n and 0 <= j < n):
                raise ParameterError(f"L axes {self.indices} out of range for n={n}")
            return [(lambda t, c: c[i], j), (lambda t, c: -c[j], i)]
        if self.name == "Vhalf":
            return [(lambda t, c: 2.0 * t, "t"), (lambda t, c: (m + 2) * c[0], 0)]
        if self.name in ("TDt", "N3"):
            return [(lambda t, c: t, "t")]
        if self.name == "Rl":
            l = self.indices[0]
            if not 0 <= l < n:
                raise ParameterError(f"Rl axis {l} out of range for n={n}")
            return [(lambda t, c: np.ones_like(c[0]), l)]
        if self.name == "N1":
            return [(lambda t, c: c[0], "t")]
        if self.name == "N2":
            sgn = float(self.indices[0])
            return [
                (lambda t, c: c[0] - sgn * 2.0 / (m + 2) * t ** ((m + 2) / 2), 0)
            ]
        # N4
        return [(lambda t, c: np.full_like(c[0], t ** ((m + 2) / 2)), 0)]


def _time_derivative(stack: np.ndarray, h: float) -> np.ndarray:
    """4th-order finite differences along axis 0 on a uniform grid."""
    nt = stack.shape[0]
    if nt < 5:
        raise DomainError("need at least 5 snapshots for 4th-order time differences")
    out = np.empty_like(stack)
    out[2:-2] = (-stack[4:] + 8 * stack[3:-1] - 8 * stack[1:-3] + stack[:-4]) / (12 * h)
    fwd = np.array([-25.0, 48.0, -36.0, 16.0, -3.0]) / (12 * h)
    for i in (0, 1):
        out[i] = sum(c * stack[i + k] for k, c in enumerate(fwd))
        out[nt - 1 - i] = -sum(c * stack[nt - 1 - i - k] for k, c in enumerate(fwd))
    return out


def apply_vector_field(fid: VectorFieldId, traj: SpectralTrajectory,
                       t_floor: float | None = None) -> SpectralTrajectory:
    """Z u on the trajectory's own (t, x) grid.

    Spatial derivatives are spectral, the time derivative is a 4th-order
    finite difference, and coefficients multiply pointwise in physical
    space.  Fields with a t^(-m/2) coefficient are evaluated only for
    t >= t_floor (default 4 time steps); earlier snapshots are zeroed.
    Passing t_floor = 0 for such a field raises a domain error.
    """
    grid = traj.grid
    times = traj.times
    h = np.diff(times)
    if len(h) == 0 or np.max(np.abs(h - h[0])) > 1e-10 * h[0]:
        raise DomainError("apply_vector_field needs a uniform time grid")
    h = float(h[0])
    if t_floor is None:
        t_floor = 4.0 * h
    if fid.singular_at_zero and t_floor <= 0:
        raise DomainError(
            f"{fid.label()} carries a negative power of t and needs t_floor > 0"
        )

    coords = grid.coords()
    terms = fid.terms(grid.n)
    phys = np.stack([dft_inverse(s).values for s in traj.snapshots])
    needs_dt = any(slot == "t" for _, slot in terms)
    dt_phys = _time_derivative(phys, h) if needs_dt else None

    out = np.zeros_like(phys)
    for i, t in enumerate(times):
        if fid.singular_at_zero and t < t_floor:
            continue
        for coeff, slot in terms:
            if slot == "t":
                out[i] += coeff(t, coords) * dt_phys[i]
            else:
                d = dft_inverse(
                    spectral_derivative(traj.snapshots[i], slot)
                ).values
                out[i] += coeff(t, coords) * d
    snaps = [dft_forward(Field(grid, out[i])) for i in range(len(times))]
    dt_out = _time_derivative(out, h)
    dts = [dft_forward(Field(grid, dt_out[i])) for i in range(len(times))]
    return SpectralTrajectory(grid, times, snaps, dts)


def conormal_scan(traj: SpectralTrajectory, fields, depth: int, s: float,
                  t_floor: float | None = None):
    """Sup-in-t H^s norms of Z_1 ... Z_k u over all words up to the depth.

    Returns a dict mapping word labels (comma-joined field labels, '' for
    the empty word) to the sup norm over snapshots with t >= t_floor.
    """
    if depth < 0 or depth > 2:
        raise ParameterError("scan depth must be 0, 1 or 2")
    h = float(traj.times[1] - traj.times[0]) if len(traj.times) > 1 else 0.0
    if t_floor is None:
        t_floor = 4.0 * h
    keep = traj.times >= t_floor

    def sup_norm(tr):
        return max(
            sobolev_norm(tr.snapshots[i], s)
            for i in range(len(tr.times)) if keep[i]
        )

    table = {"": sup_norm(traj)}
    level = {(): traj}
    for _ in range(depth):
        nxt = {}
        for word, tr in level.items():
            for fid in fields:
                new_word = word + (fid,)
                applied = apply_vector_field(fid, tr, t_floor=t_floor)
                nxt[new_word] = applied
                table[",".join(f.label() for f in new_word)] = sup_norm(applied)
        level = nxt
    return table


# ridge extraction ----------------------------------------------------------


def gradient_magnitude(snapshot: Field) -> np.ndarray:
    total = np.zeros(snapshot.grid.sizes)
    for axis in range(snapshot.grid.n):
        d = dft_inverse(spectral_derivative(snapshot, axis)).values
        total += np.abs(d) ** 2
    return np.sqrt(total)


def ridge_extract(traj: SpectralTrajectory, threshold: float = 0.5):
    """Local maxima of |grad u| above threshold x per-snapshot max.

    Returns a list of (t, coordinates tuple, strength) records.
    """
    grid = traj.grid
    points = []
    for i, t in enumerate(traj.times):
        mag = gradient_magnitude(traj.snapshots[i])
        peak = float(np.max(mag))
        if peak <= 0:
            continue
        is_max = np.ones(grid.sizes, dtype=bool)
        for axis in range(grid.n):
            is_max &= mag >= np.roll(mag, 1, axis=axis)
            is_max &= mag >= np.roll(mag, -1, axis=axis)
        is_max &= mag > threshold * peak
        for idx in np.argwhere(is_max):
            xs = tuple(float(grid.axis_coords(a)[idx[a]]) for a in range(grid.n))
            points.append((float(t), xs, float(mag[tuple(idx)])))
    return points


# rate fitting --------------------------------------------------------------


@dataclass(frozen=True)
class EstimateFit:
    exponent: float
    r2: float
    intercept: float


def fit_power_law(ts, values) -> EstimateFit:
    ts = np.asarray(ts, dtype=float)
    values = np.asarray(values, dtype=float)
    if len(ts) < 5:
        raise DomainError("fit_power_law needs at least 5 samples")
    if np.any(ts <= 0) or np.any(values <= 0):
        raise DomainError("fit_power_law needs positive inputs")
    lx, ly = np.log(ts), np.log(values)
    slope, intercept = np.polyfit(lx, ly, 1)
    resid = ly - (slope * lx + intercept)
    ss_tot = float(np.sum((ly - ly.mean()) ** 2))
    r2 = 1.0 if ss_tot == 0 else 1.0 - float(np.sum(resid**2)) / ss_tot
    return EstimateFit(float(slope), r2, float(intercept))


# threshold catalog ---------------------------------------------------------


def p1_threshold(m: int, p: float) -> float:
    return min((p * (m + 8) - 4) / (2 * p * (m + 2)), 1.0)


def p2_threshold(m: int, p: float) -> float:
    return min(2 * (p - 1) / (p * (m + 2)), m / (2 * (m + 2)))


def p3_threshold(m: int) -> float:
    return min((m + 8) / (2 * (m + 2)), 1.0)


def p4_threshold(m: int) -> float:
    return min(2 / (m + 2), m / (2 * (m + 2)))


@dataclass(frozen=True)
class CatalogEntry:
    lemma: str
    exponent: float
    window: tuple = (1e-3, 1e-1)
    tolerance: float = 0.15


def estimate_catalog(m: int, s1: float | None = None, p: float = 2.0):
    """Closed-form rate exponents for concrete (m, s1, p)."""
    if s1 is None:
        s1 = m / (2 * (m + 2))
    return [
        CatalogEntry("homogeneous-derivative-loss", -s1 * (m + 2) / 2, tolerance=0.10),
        CatalogEntry("zero-data-gain", 2.0 - (1.0 / (m + 2)) * (m + 2) / 2),
        CatalogEntry("threshold-p1", p1_threshold(m, p)),
        CatalogEntry("threshold-p2", p2_threshold(m, p)),
        CatalogEntry("threshold-p3", p3_threshold(m)),
        CatalogEntry("threshold-p4", p4_threshold(m)),
    ]


# exports -------------------------------------------------------------------


def export_ridge_csv(path, points):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["t", "coords", "strength"])
        for t, xs, strength in points:
            w.writerow([repr(t), " ".join(repr(x) for x in xs), repr(strength)])
    plot = str(path) + ".gp"
    with open(plot, "w") as fh:
        fh.write(
            'set datafile separator ","\n'
            f'plot "{path}" using 1:2 with points title "ridge"\n'
        )


def export_scan_csv(path, table, s: float):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["word", "s", "sup_norm"])
        for word, norm in table.items():
            w.writerow([word or "(id)", repr(s), repr(norm)])


def export_fit_csv(path, entries, fits):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["lemma", "expected", "fitted", "r2"])
        for e, f in zip(entries, fits):
            w.writerow([e.lemma, repr(e.exponent), repr(f.exponent), repr(f.r2)])
