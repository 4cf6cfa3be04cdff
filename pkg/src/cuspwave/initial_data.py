"""Discontinuous data families: half-space jumps across x1 = 0 and
angle-dependent profiles homogeneous of degree zero near the origin,
plus the Fourier-side even/Hilbert decomposition of the jump family.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, ParameterError, ParseError
from .spectral import Field, Grid, dft_forward, hilbert_transform_1d


def bump(r, width, amplitude=1.0, center=0.0):
    """Smooth compactly supported bump exp(1 - 1/(1 - (r/w)^2)) on |r|<w."""
    r = np.asarray(r, dtype=float)
    s = (r - center) / width
    out = np.zeros_like(s)
    inside = np.abs(s) < 1.0
    out[inside] = amplitude * np.exp(1.0 - 1.0 / (1.0 - s[inside] ** 2))
    return out


@dataclass(frozen=True)
class BumpSpec:
    """One radial bump component: amplitude * exp(1 - 1/(1-(r/w)^2))."""

    amplitude: float = 1.0
    width: float = 1.0
    center: tuple = ()

    def sample(self, coords) -> np.ndarray:
        c = self.center if self.center else (0.0,) * len(coords)
        if len(c) != len(coords):
            raise ParameterError("bump center dimension does not match grid")
        r2 = sum((x - ci) ** 2 for x, ci in zip(coords, c))
        return bump(np.sqrt(r2), self.width, self.amplitude)


@dataclass(frozen=True)
class AngularTerm:
    """One term amplitude * cos(k*theta + phase) of an angular profile (n=2),
    or amplitude * sign-symmetric monomial x1/|x| for general n via k=1."""

    k: int
    amplitude: float = 1.0
    phase: float = 0.0


@dataclass(frozen=True)
class InitialDataSpec:
    family: str  # "A1" | "A2" | "smooth"
    left: BumpSpec | None = None
    right: BumpSpec | None = None
    smooth: BumpSpec | None = None
    angular: tuple = ()  # AngularTerm sequence, used by A2
    radial: BumpSpec | None = None

    def __post_init__(self):
        if self.family not in ("A1", "A2", "smooth"):
            raise ParameterError(f"unknown data family {self.family!r}")
        if self.family == "A1" and (self.left is None or self.right is None):
            raise ParameterError("A1 data needs left and right components")
        if self.family == "A2" and self.radial is None:
            raise ParameterError("A2 data needs a radial component")
        if self.family == "smooth" and self.smooth is None:
            raise ParameterError("smooth data needs a smooth component")


def _check_margin(spec_width, grid: Grid) -> None:
    if spec_width > grid.L / 2:
        warnings.warn(
            f"data support width {spec_width} exceeds half the box half-length "
            f"{grid.L}; periodization may wrap around",
            stacklevel=3,
        )


def make_smooth(spec: InitialDataSpec, grid: Grid) -> Field:
    if spec.family != "smooth":
        raise DomainError("make_smooth requires a smooth-family spec")
    _check_margin(spec.smooth.width, grid)
    return Field(grid, spec.smooth.sample(grid.coords()))


def make_a1(spec: InitialDataSpec, grid: Grid) -> Field:
    """Sample left + (right - left) * E(x1) with E(0) = 1 (right limit)."""
    if spec.family != "A1":
        raise DomainError("make_a1 requires an A1-family spec")
    coords = grid.coords()
    left = spec.left.sample(coords)
    right = spec.right.sample(coords)
    origin = tuple(np.argmin(np.abs(grid.axis_coords(a))) for a in range(grid.n))
    if abs(left[origin] - right[origin]) < 1e-14:
        warnings.warn("A1 components agree at x=0; the data carries no jump")
    _check_margin(max(spec.left.width, spec.right.width), grid)
    step = (coords[0] >= 0.0).astype(float)
    return Field(grid, left + (right - left) * step)


def _angular_profile(spec: InitialDataSpec, coords):
    r2 = sum(x * x for x in coords)
    r = np.sqrt(r2)
    if len(coords) == 1:
        theta = np.where(coords[0] >= 0, 0.0, np.pi)
    else:
        theta = np.arctan2(coords[1], coords[0])
    g = np.zeros_like(r)
    avg = 0.0
    for term in spec.angular:
        g += term.amplitude * np.cos(term.k * theta + term.phase)
        if term.k == 0:
            avg += term.amplitude * np.cos(term.phase)
    return g, avg, r


def make_a2(spec: InitialDataSpec, grid: Grid) -> Field:
    """Sample g(x/|x|) * radial bump; the origin takes the angular average."""
    if spec.family != "A2":
        raise DomainError("make_a2 requires an A2-family spec")
    _check_margin(spec.radial.width, grid)
    coords = grid.coords()
    g, avg, r = _angular_profile(spec, coords)
    vals = g * spec.radial.sample(coords)
    origin = tuple(np.argmin(np.abs(grid.axis_coords(a))) for a in range(grid.n))
    if max(abs(float(grid.axis_coords(a)[origin[a]])) for a in range(grid.n)) > 1e-12:
        raise DomainError("A2 sampling needs the origin on the grid")
    vals[origin] = avg * spec.radial.sample(tuple(np.zeros(1) for _ in coords))[0]
    return Field(grid, vals)


def heaviside_fourier_split(spec: InitialDataSpec, grid: Grid):
    """Fourier transform of A1 data as even part plus Hilbert part:
    phi_hat = (phi1_hat + phi2_hat)/2 - (i/2) H(phi1_hat - phi2_hat),
    where H acts along the x1 frequency axis."""
    if spec.family != "A1":
        raise DomainError("heaviside split applies to A1 data only")
    if grid.n != 1:
        raise DomainError("heaviside_fourier_split is implemented for n=1")
    coords = grid.coords()
    phi1 = spec.right.sample(coords)  # value on x1 > 0
    phi2 = spec.left.sample(coords)
    even = dft_forward(Field(grid, 0.5 * (phi1 + phi2)))
    diff = Field(grid, 0.5 * (phi1 - phi2))
    # -(i/2) H(phi1_hat - phi2_hat) equals the transform of sign(x) * diff,
    # since multiplication by sign(x) is the frequency-side Hilbert transform
    # up to the factor -i
    x = coords[0]
    sgn = np.where(x >= 0, 1.0, -1.0)
    hil = dft_forward(Field(grid, sgn * diff.values))
    return even, hil


def parse_data_spec(text: str) -> InitialDataSpec:
    """Plain-text key=value schema.

    Keys: family; left_amp/left_width, right_amp/right_width (A1);
    smooth_amp/smooth_width (smooth); radial_amp/radial_width and
    angular = k:amp:phase[,k:amp:phase...] (A2).  '#' starts a comment.
    """
    kv = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ParseError(f"expected key=value, got {line!r}", line=lineno,
                             column=1, expected="key=value")
        k, v = (s.strip() for s in line.split("=", 1))
        kv[k] = v

    fam = kv.get("family")
    if fam is None:
        raise ParseError("missing 'family' key", line=0, column=0, expected="family=...")

    def bump_of(prefix, default_amp=1.0):
        return BumpSpec(
            amplitude=float(kv.get(f"{prefix}_amp", default_amp)),
            width=float(kv.get(f"{prefix}_width", 1.0)),
        )

    if fam == "A1":
        return InitialDataSpec("A1", left=bump_of("left", 0.0), right=bump_of("right"))
    if fam == "smooth":
        return InitialDataSpec("smooth", smooth=bump_of("smooth"))
    if fam == "A2":
        terms = []
        for chunk in kv.get("angular", "0:1:0").split(","):
            parts = chunk.split(":")
            if len(parts) != 3:
                raise ParseError(f"bad angular term {chunk!r}", line=0, column=0,
                                 expected="k:amp:phase")
            terms.append(AngularTerm(int(parts[0]), float(parts[1]), float(parts[2])))
        return InitialDataSpec("A2", radial=bump_of("radial"), angular=tuple(terms))
    raise ParseError(f"unknown family {fam!r}", line=0, column=0,
                     expected="A1|A2|smooth")
