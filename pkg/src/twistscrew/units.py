"""Physical constants and conversions into the working units (nm, nm^-2, meV, T)."""

from __future__ import annotations

import math
from dataclasses import dataclass

# CODATA 2018 (exact where the SI fixes them)
HBAR = 1.054571817e-34  # J s
ELECTRON_MASS = 9.1093837015e-31  # kg
ELEMENTARY_CHARGE = 1.602176634e-19  # C

_J_PER_MEV = ELEMENTARY_CHARGE * 1e-3
_NM2_PER_M2 = 1e18


@dataclass(frozen=True)
class Material:
    """Effective-mass carrier: ``mstar_ratio`` = m*/m_e, ``charge_sign`` = -1 for electrons."""

    mstar_ratio: float = 0.067
    charge_sign: int = -1

    def __post_init__(self):
        if not (math.isfinite(self.mstar_ratio) and self.mstar_ratio > 0):
            raise ValueError(f"mstar_ratio must be positive, got {self.mstar_ratio!r}")
        if self.charge_sign not in (1, -1):
            raise ValueError(f"charge_sign must be +1 or -1, got {self.charge_sign!r}")


ELECTRON_GAAS = Material()


def kinetic_coefficient(material: Material) -> float:
    """hbar^2 / (2 m*) in meV nm^2."""
    c = HBAR**2 / (2.0 * ELECTRON_MASS * material.mstar_ratio)
    return c / _J_PER_MEV * _NM2_PER_M2


def beta_B(B: float, material: Material) -> float:
    """Cyclotron parameter q B / (2 hbar) in nm^-2 (negative for electrons at B > 0)."""
    return material.charge_sign * ELEMENTARY_CHARGE * B / (2.0 * HBAR) / _NM2_PER_M2


def energy_from_eps(eps, kz: float, material: Material):
    """Total energy E = hbar^2/(2m*) (eps + kz^2) in meV. Works elementwise on arrays."""
    return kinetic_coefficient(material) * (eps + kz * kz)


def cyclotron_energy(B: float, material: Material) -> float:
    """hbar * omega_c = hbar e |B| / m* in meV."""
    w_c = ELEMENTARY_CHARGE * abs(B) / (ELECTRON_MASS * material.mstar_ratio)
    return HBAR * w_c / _J_PER_MEV


def magnetic_length(B: float) -> float:
    """sqrt(hbar / (e |B|)) in nm; infinite at B = 0."""
    if B == 0:
        return math.inf
    return math.sqrt(HBAR / (ELEMENTARY_CHARGE * abs(B))) * 1e9


@dataclass(frozen=True)
class DimensionlessGroups:
    kappa: float
    beta1: float
    beta2: float
    lam: float


def dimensionless_groups(geometry, mode, B: float, material: Material, L: float) -> DimensionlessGroups:
    """kappa = kz L, beta1 = kz omega1, beta2 = kz omega2 L, lambda = beta_B L^2."""
    if not L > 0:
        raise ValueError("device size L must be positive")
    kz = mode.kz
    return DimensionlessGroups(
        kappa=kz * L,
        beta1=kz * geometry.omega1,
        beta2=kz * geometry.omega2 * L,
        lam=beta_B(B, material) * L * L,
    )


def burgers_per_turn(omega1: float) -> float:
    """Axial displacement accumulated per turn around the screw axis, b = 2 pi omega1."""
    return 2.0 * math.pi * omega1
