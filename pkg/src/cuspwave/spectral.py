"""Periodic-grid fields on [-L, L)^n with spectral calculus.

The convention throughout: integer wavenumbers k (numpy fft ordering) map to
continuous frequencies xi = pi * k / L, and the DFT is orthonormal so Parseval
holds without extra factors.  Physical norms carry the cell measure (2L/N)^n.
"""

from __future__ import annotations

import csv
import struct
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, GridMismatchError, ParameterError


@dataclass(frozen=True)
class Grid:
    """Uniform periodic grid on the box [-L, L) per axis."""

    n: int
    sizes: tuple
    L: float

    def __post_init__(self):
        if self.n not in (1, 2, 3):
            raise ParameterError(f"dimension must be 1, 2 or 3, got {self.n}")
        sizes = tuple(int(s) for s in self.sizes)
        object.__setattr__(self, "sizes", sizes)
        if len(sizes) != self.n:
            raise ParameterError("sizes must have one entry per dimension")
        for s in sizes:
            if s < 8 or s & (s - 1):
                raise ParameterError(f"grid sizes must be powers of two >= 8, got {s}")
        if not self.L > 0:
            raise ParameterError("box half-length must be positive")

    @property
    def cell_measure(self) -> float:
        out = 1.0
        for s in self.sizes:
            out *= 2.0 * self.L / s
        return out

    def axis_coords(self, axis: int) -> np.ndarray:
        s = self.sizes[axis]
        return -self.L + (2.0 * self.L / s) * np.arange(s)

    def coords(self):
        """Meshgrid of physical coordinates, one array per axis."""
        return np.meshgrid(*(self.axis_coords(a) for a in range(self.n)), indexing="ij")

    def axis_xi(self, axis: int) -> np.ndarray:
        s = self.sizes[axis]
        return np.pi / self.L * np.fft.fftfreq(s, d=1.0 / s)

    def xi_mesh(self):
        return np.meshgrid(*(self.axis_xi(a) for a in range(self.n)), indexing="ij")

    def xi_norm(self) -> np.ndarray:
        """|xi| on the spectral grid."""
        out = np.zeros(self.sizes)
        for x in self.xi_mesh():
            out += x * x
        return np.sqrt(out)


@dataclass(frozen=True)
class Field:
    """Complex samples on a grid, in either physical or spectral space."""

    grid: Grid
    values: np.ndarray
    space: str = "physical"

    def __post_init__(self):
        if self.space not in ("physical", "spectral"):
            raise ParameterError(f"space must be physical or spectral, got {self.space!r}")
        vals = np.asarray(self.values, dtype=complex)
        if vals.shape != self.grid.sizes:
            vals = vals.reshape(self.grid.sizes)
        object.__setattr__(self, "values", vals)

    def copy_with(self, values, space=None) -> "Field":
        return Field(self.grid, values, space or self.space)


@dataclass
class SpectralTrajectory:
    """Time-indexed spectral snapshots of u and of its time derivative."""

    grid: Grid
    times: np.ndarray
    snapshots: list
    dt_snapshots: list

    def __post_init__(self):
        self.times = np.asarray(self.times, dtype=float)
        if not (len(self.times) == len(self.snapshots) == len(self.dt_snapshots)):
            raise ParameterError("times, snapshots, dt_snapshots must have equal length")
        if len(self.times) and self.times[0] != 0.0:
            raise ParameterError("trajectory times must start at 0")
        if np.any(np.diff(self.times) <= 0):
            raise ParameterError("trajectory times must be strictly increasing")

    def snapshot_at(self, t: float) -> Field:
        i = int(np.argmin(np.abs(self.times - t)))
        if abs(self.times[i] - t) > 1e-12 * max(1.0, abs(t)):
            raise DomainError(f"no snapshot at t={t}; nearest is {self.times[i]}")
        return self.snapshots[i]


def _require_space(f: Field, space: str) -> None:
    if f.space != space:
        raise ParameterError(f"expected a {space} field, got {f.space}")


def require_same_grid(*fields) -> Grid:
    g = fields[0].grid
    for f in fields[1:]:
        if f.grid != g:
            raise GridMismatchError(f"grids differ: {f.grid} vs {g}")
    return g


def dft_forward(f: Field) -> Field:
    _require_space(f, "physical")
    return f.copy_with(np.fft.fftn(f.values, norm="ortho"), "spectral")


def dft_inverse(f: Field) -> Field:
    _require_space(f, "spectral")
    return f.copy_with(np.fft.ifftn(f.values, norm="ortho"), "physical")


def l2_norm(f: Field) -> float:
    return float(np.sqrt(np.sum(np.abs(f.values) ** 2) * f.grid.cell_measure))


def sobolev_norm(f: Field, s: float) -> float:
    """Discrete H^s norm with the exact multiplier (1+|xi|^2)^(s/2)."""
    _require_space(f, "spectral")
    w = (1.0 + f.grid.xi_norm() ** 2) ** s
    return float(np.sqrt(np.sum(w * np.abs(f.values) ** 2) * f.grid.cell_measure))


def spectral_derivative(f: Field, axis: int) -> Field:
    _require_space(f, "spectral")
    if not 0 <= axis < f.grid.n:
        raise ParameterError(f"axis {axis} out of range for n={f.grid.n}")
    xi = f.grid.xi_mesh()[axis]
    return f.copy_with(1j * xi * f.values)


def laplacian(f: Field) -> Field:
    _require_space(f, "spectral")
    return f.copy_with(-(f.grid.xi_norm() ** 2) * f.values)


def hilbert_transform_1d(f: Field) -> Field:
    """Periodic Hilbert transform: multiplier -i*sign(xi), zero on the mean."""
    if f.grid.n != 1:
        raise DomainError("hilbert_transform_1d requires a one-dimensional grid")
    phys = f.space == "physical"
    g = dft_forward(f) if phys else f
    mult = -1j * np.sign(g.grid.axis_xi(0))
    out = g.copy_with(mult * g.values)
    return dft_inverse(out) if phys else out


def dealias(f: Field) -> Field:
    """Zero every mode with any |k| > size/3 (the 2/3 rule)."""
    _require_space(f, "spectral")
    vals = f.values.copy()
    for axis, s in enumerate(f.grid.sizes):
        k = np.abs(np.fft.fftfreq(s, d=1.0 / s))
        shape = [1] * f.grid.n
        shape[axis] = s
        vals = vals * (k <= s / 3.0).reshape(shape)
    return f.copy_with(vals)


_MAGIC = b"CWGRID1"


def save_field(path, f: Field) -> None:
    """Write the self-describing little-endian binary layout."""
    with open(path, "wb") as fh:
        fh.write(_MAGIC)
        fh.write(struct.pack("<I", f.grid.n))
        fh.write(struct.pack(f"<{f.grid.n}I", *f.grid.sizes))
        fh.write(struct.pack("<d", f.grid.L))
        inter = np.empty(f.values.size * 2)
        inter[0::2] = f.values.real.ravel()
        inter[1::2] = f.values.imag.ravel()
        fh.write(inter.astype("<f8").tobytes())


def load_field(path, space: str = "physical") -> Field:
    with open(path, "rb") as fh:
        magic = fh.read(len(_MAGIC))
        if magic != _MAGIC:
            raise DomainError(f"{path}: not a CWGRID1 file")
        (n,) = struct.unpack("<I", fh.read(4))
        if n not in (1, 2, 3):
            raise DomainError(f"{path}: bad dimension {n}")
        sizes = struct.unpack(f"<{n}I", fh.read(4 * n))
        (L,) = struct.unpack("<d", fh.read(8))
        count = int(np.prod(sizes))
        raw = np.frombuffer(fh.read(16 * count), dtype="<f8")
        if raw.size != 2 * count:
            raise DomainError(f"{path}: truncated sample payload")
    vals = raw[0::2] + 1j * raw[1::2]
    return Field(Grid(n, tuple(sizes), L), vals.reshape(sizes), space)


def export_csv(path, f: Field) -> None:
    """Index coordinates plus re/im columns, one row per sample."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow([f"i{a}" for a in range(f.grid.n)] + ["re", "im"])
        for idx in np.ndindex(*f.grid.sizes):
            v = f.values[idx]
            w.writerow(list(idx) + [repr(float(v.real)), repr(float(v.imag))])
