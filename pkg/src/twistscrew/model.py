"""Geometry, field and mode parameters; the Langer effective potential and its
term-by-term decomposition; geometric phases of axial plane waves."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .units import Material, ELECTRON_GAAS, beta_B


@dataclass(frozen=True)
class Geometry:
    """Screw profile f(r) = omega1 + omega2 r.

    omega1 (nm) is the global screw (Burgers vector per turn / 2 pi), omega2 the
    dimensionless local twist. Either sign is allowed.
    """

    omega1: float = 50.0
    omega2: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.omega1) and math.isfinite(self.omega2)):
            raise ValueError("geometry parameters must be finite")


@dataclass(frozen=True)
class Fields:
    """Uniform axial field B (tesla) and reduced Aharonov-Bohm flux phi = Phi/Phi_0."""

    B: float = 1.0
    phi: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.B) and math.isfinite(self.phi)):
            raise ValueError("field parameters must be finite")


@dataclass(frozen=True)
class Mode:
    """Azimuthal index ell and axial wavenumber kz (nm^-1)."""

    ell: int = 1
    kz: float = 0.01

    def __post_init__(self):
        if int(self.ell) != self.ell:
            raise ValueError(f"ell must be an integer, got {self.ell!r}")
        object.__setattr__(self, "ell", int(self.ell))
        if not math.isfinite(self.kz):
            raise ValueError("kz must be finite")


def screw_profile(geometry: Geometry, r):
    if np.ndim(r):
        r = np.asarray(r, dtype=float)
    return geometry.omega1 + geometry.omega2 * r


def shifted_index(mode: Mode, fields: Fields, geometry: Geometry) -> float:
    """Signed combination ell - phi - kz omega1 (everything the core sees)."""
    return mode.ell - fields.phi - mode.kz * geometry.omega1


def effective_index(mode: Mode, fields: Fields, geometry: Geometry) -> float:
    """nu = |ell - phi - kz omega1|, the Frobenius index at the axis."""
    return abs(shifted_index(mode, fields, geometry))


def angular_bracket(geometry, fields, mode, r, material: Material = ELECTRON_GAAS):
    """ell - phi - kz f(r) - beta_B r^2, the local kinetic angular momentum."""
    r = np.asarray(r, dtype=float)
    bb = beta_B(fields.B, material)
    return (mode.ell - fields.phi) - mode.kz * (geometry.omega1 + geometry.omega2 * r) - bb * r * r


def effective_potential(geometry, fields, mode, r, material: Material = ELECTRON_GAAS):
    """Langer potential U(r) = bracket^2 / r^2 - 1/(4 r^2) in nm^-2.

    The bracket is squared before dividing, never expanded, so U stays accurate
    near the bracket's zero.
    """
    r = np.asarray(r, dtype=float)
    if np.any(r <= 0):
        raise ValueError("effective potential is defined only for r > 0")
    b = angular_bracket(geometry, fields, mode, r, material)
    out = (b * b - 0.25) / (r * r)
    return out if out.ndim else float(out)


@dataclass(frozen=True)
class TermDecomposition:
    """Coefficients of the expanded radial bracket

        k_perp^2 + constant_shift + coulomb/r + centrifugal/r^2 + linear_tilt*r + landau*r^2
    """

    constant_shift: float
    centrifugal_coeff: float
    coulomb_coeff: float
    linear_tilt_coeff: float
    landau_coeff: float

    def evaluate(self, r):
        """Sum of the five r-dependent contributions; equals -(U(r) + 1/(4r^2))."""
        r = np.asarray(r, dtype=float)
        return (
            self.constant_shift
            + self.centrifugal_coeff / (r * r)
            + self.coulomb_coeff / r
            + self.linear_tilt_coeff * r
            + self.landau_coeff * r * r
        )


def term_decomposition(geometry, fields, mode, material: Material = ELECTRON_GAAS) -> TermDecomposition:
    x = shifted_index(mode, fields, geometry)
    bb = beta_B(fields.B, material)
    kz, w2 = mode.kz, geometry.omega2
    return TermDecomposition(
        constant_shift=-(kz * w2) ** 2 + 2.0 * bb * x,
        centrifugal_coeff=-x * x,
        coulomb_coeff=2.0 * kz * w2 * x,
        linear_tilt_coeff=-2.0 * kz * w2 * bb,
        landau_coeff=-bb * bb,
    )


def geometric_phase(geometry: Geometry, kz: float, r: float) -> float:
    """Phase 2 pi kz f(r) picked up by an axial plane wave per turn at radius r."""
    if r < 0:
        raise ValueError("radius must be non-negative")
    return 2.0 * math.pi * kz * (geometry.omega1 + geometry.omega2 * r)


def relative_phase(geometry: Geometry, kz: float, r1: float, r2: float) -> float:
    """Phase difference between loops at r1 and r2; the omega1 part cancels."""
    if r1 < 0 or r2 < 0:
        raise ValueError("radii must be non-negative")
    return 2.0 * math.pi * kz * geometry.omega2 * (r1 - r2)
