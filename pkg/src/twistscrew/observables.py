"""Densities and probability currents of solved stationary states.

Currents are "reduced": the hbar/m* prefactor is divided out, so j_phi and j_z
carry the bracketed factor times |Psi|^2 = |u|^2 / r. Multiply by hbar/m* for
physical values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import screw_profile
from .solver import RadialProblem, Spectrum
from .units import beta_B

FIG_WINDOW = (0.0, 40.0)  # nm


@dataclass(frozen=True, eq=False)
class CurrentProfile:
    r: np.ndarray
    density: np.ndarray
    j_phi: np.ndarray
    j_z: np.ndarray
    state_index: int = 0

    def window(self, r_lo=FIG_WINDOW[0], r_hi=FIG_WINDOW[1]) -> "CurrentProfile":
        keep = (self.r >= r_lo) & (self.r <= r_hi)
        return CurrentProfile(
            self.r[keep], self.density[keep], self.j_phi[keep], self.j_z[keep], self.state_index
        )


@dataclass(frozen=True)
class RingCurrents:
    r0: float
    delta: float
    I_phi: float
    I_z: float


def density(spectrum: Spectrum, n: int = 0) -> np.ndarray:
    """|u_n|^2 / r on the interior nodes (nm^-1 for unit-normalized u)."""
    u = spectrum.state(n)
    return u * u / spectrum.r


def _azimuthal_bracket(problem: RadialProblem, r):
    """ell - phi - beta_B r^2 (no screw term)."""
    bb = beta_B(problem.fields.B, problem.material)
    return problem.mode.ell - problem.fields.phi - bb * r * r


def azimuthal_current(spectrum: Spectrum, n: int = 0) -> np.ndarray:
    p = spectrum.problem
    r = spectrum.r
    f = screw_profile(p.geometry, r)
    return (_azimuthal_bracket(p, r) - p.mode.kz * f) / (r * r) * density(spectrum, n)


def axial_current(spectrum: Spectrum, n: int = 0) -> np.ndarray:
    p = spectrum.problem
    r = spectrum.r
    f = screw_profile(p.geometry, r)
    r2 = r * r
    factor = (1.0 + f * f / r2) * p.mode.kz - f / r2 * _azimuthal_bracket(p, r)
    return factor * density(spectrum, n)


def radial_current(spectrum: Spectrum, n: int = 0) -> np.ndarray:
    """Im(u* du/dr) / r; identically zero for the real stationary eigenvectors."""
    u = spectrum.state(n).astype(complex)
    du = np.gradient(u, spectrum.problem.grid.h)
    return np.imag(np.conj(u) * du) / spectrum.r


def current_profile(spectrum: Spectrum, n: int = 0) -> CurrentProfile:
    return CurrentProfile(
        r=spectrum.r,
        density=density(spectrum, n),
        j_phi=azimuthal_current(spectrum, n),
        j_z=axial_current(spectrum, n),
        state_index=n,
    )


def axis_sign_prediction(problem: RadialProblem) -> int:
    """sgn(omega1 kz - (ell - phi)): the sign of j_z as r -> 0+.

    The near-axis limit of j_z is (omega1 / r^2)(kz omega1 - (ell - phi)) |Psi|^2,
    so this law assumes omega1 > 0; for omega1 < 0 the physical sign flips.
    """
    v = problem.geometry.omega1 * problem.mode.kz - (problem.mode.ell - problem.fields.phi)
    return int(np.sign(v))


def axial_zero_radius(problem: RadialProblem) -> float | None:
    """Radius where j_z changes sign, for omega2 = 0 and B = 0 only."""
    if problem.geometry.omega2 != 0 or problem.fields.B != 0:
        raise ValueError("closed-form zero of j_z needs omega2 = 0 and B = 0")
    kz = problem.mode.kz
    if kz == 0:
        raise ValueError("closed-form zero of j_z needs kz != 0")
    w1 = problem.geometry.omega1
    rad = w1 * (problem.mode.ell - problem.fields.phi) / kz - w1 * w1
    return math.sqrt(rad) if rad > 0 else None


def _full(values: np.ndarray) -> np.ndarray:
    # pad interior samples with the Dirichlet zeros at both walls
    return np.concatenate(([0.0], values, [0.0]))


def annular_currents(spectrum: Spectrum, n: int, r0: float, delta: float) -> RingCurrents:
    """Trapezoid integrals of r j over [r0 - delta, r0 + delta], ends snapped to nodes."""
    grid = spectrum.problem.grid
    if delta < 0:
        raise ValueError("annulus half-width must be non-negative")
    lo, hi = r0 - delta, r0 + delta
    if lo < grid.r_min or hi > grid.r_max:
        raise ValueError(
            f"annulus [{lo:g}, {hi:g}] nm lies outside the grid [{grid.r_min:g}, {grid.r_max:g}] nm"
        )
    h = grid.h
    i_lo = int(math.floor((lo - grid.r_min) / h + 0.5))
    i_hi = int(math.floor((hi - grid.r_min) / h + 0.5))
    r = grid.nodes[i_lo : i_hi + 1]
    jp = _full(azimuthal_current(spectrum, n))[i_lo : i_hi + 1]
    jz = _full(axial_current(spectrum, n))[i_lo : i_hi + 1]
    if len(r) < 2:
        return RingCurrents(r0, delta, 0.0, 0.0)
    return RingCurrents(r0, delta, float(np.trapezoid(r * jp, r)), float(np.trapezoid(r * jz, r)))


def backflow_fraction(spectrum: Spectrum, n: int = 0) -> float:
    """Weight of the negative-j_z region relative to |integral of r j_z| over the box."""
    r = spectrum.r
    w = r * axial_current(spectrum, n)
    h = spectrum.problem.grid.h
    total = abs(np.sum(w) * h)
    negative = abs(np.sum(w[w < 0]) * h)
    return negative / total if total else math.inf
