"""Finite-difference Sturm-Liouville solver for the Langer radial equation

    -u'' + U(r) u = eps u,   u(r_min) = u(r_max) = 0

on a uniform grid of N nodes (endpoints included, Dirichlet values eliminated).
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .model import Fields, Geometry, Mode, effective_index, effective_potential
from .units import ELECTRON_GAAS, Material, energy_from_eps

MIN_POINTS = 16

# below this index both Frobenius solutions vanish at the axis
_SOFT_CORE_NU = 0.5 - 1e-12


class SolverError(RuntimeError):
    """Eigenvalue iteration failed; ``residuals`` holds ||A v - eps v|| per state."""

    def __init__(self, message, residuals=None):
        super().__init__(message)
        self.residuals = residuals


@dataclass(frozen=True)
class Grid:
    r_min: float = 1e-3
    r_max: float = 500.0
    n_points: int = 2000

    def __post_init__(self):
        if not self.r_min > 0:
            raise ValueError(f"r_min must be > 0, got {self.r_min!r}")
        if not self.r_max > self.r_min:
            raise ValueError("r_max must exceed r_min")
        if int(self.n_points) != self.n_points or self.n_points < MIN_POINTS:
            raise ValueError(f"n_points must be an integer >= {MIN_POINTS}, got {self.n_points!r}")
        object.__setattr__(self, "n_points", int(self.n_points))

    @property
    def h(self) -> float:
        return (self.r_max - self.r_min) / (self.n_points - 1)

    @property
    def nodes(self) -> np.ndarray:
        return self.r_min + self.h * np.arange(self.n_points)

    @property
    def interior(self) -> np.ndarray:
        return self.nodes[1:-1]


_PARAM_OWNER = {
    "omega1": "geometry",
    "omega2": "geometry",
    "B": "fields",
    "phi": "fields",
    "ell": "mode",
    "kz": "mode",
    "r_min": "grid",
    "r_max": "grid",
    "n_points": "grid",
    "mstar_ratio": "material",
    "charge_sign": "material",
}


@dataclass(frozen=True)
class RadialProblem:
    geometry: Geometry = field(default_factory=Geometry)
    fields: Fields = field(default_factory=Fields)
    mode: Mode = field(default_factory=Mode)
    grid: Grid = field(default_factory=Grid)
    material: Material = ELECTRON_GAAS

    def with_params(self, **changes) -> "RadialProblem":
        """Copy with flat parameter overrides, e.g. ``p.with_params(omega2=1.0, B=-1)``."""
        grouped: dict[str, dict] = {}
        for key, value in changes.items():
            try:
                owner = _PARAM_OWNER[key]
            except KeyError:
                raise TypeError(f"unknown problem parameter {key!r}") from None
            grouped.setdefault(owner, {})[key] = value
        parts = {
            owner: dataclasses.replace(getattr(self, owner), **kw) for owner, kw in grouped.items()
        }
        return dataclasses.replace(self, **parts)

    def potential(self, r):
        return effective_potential(self.geometry, self.fields, self.mode, r, self.material)

    @property
    def nu(self) -> float:
        return effective_index(self.mode, self.fields, self.geometry)


def benchmark_problem(**overrides) -> RadialProblem:
    """GaAs-like electron, ell=1, kz=0.01/nm, omega1=50 nm, omega2=0, B=1 T, phi=0,
    N=2000 on [1e-3, 500] nm."""
    return RadialProblem().with_params(**overrides) if overrides else RadialProblem()


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Lowest eigenpairs. ``u[n]`` is sampled on ``r`` (interior nodes) with
    h * sum(u[n]**2) == 1, i.e. the trapezoid rule with zero end values."""

    problem: RadialProblem
    eps: np.ndarray
    u: np.ndarray
    r: np.ndarray

    @property
    def energies_meV(self) -> np.ndarray:
        return energy_from_eps(self.eps, self.problem.mode.kz, self.problem.material)

    def __len__(self):
        return len(self.eps)

    def state(self, n: int) -> np.ndarray:
        if not 0 <= n < len(self.eps):
            raise IndexError(f"state {n} not solved (have {len(self.eps)})")
        return self.u[n]


def core_correction(problem: RadialProblem) -> np.ndarray:
    """Potential correction on interior nodes that makes the Dirichlet three-point
    operator exact on the regular Frobenius solution g = r**(nu + 1/2).

    Zero unless nu < 1/2, where Dirichlet at r_min cannot tell the regular from the
    irregular solution (both vanish at the axis) and the plain scheme converges
    only logarithmically to the wrong level.
    """
    grid = problem.grid
    nu = problem.nu
    r_in = grid.interior
    if nu >= _SOFT_CORE_NU:
        return np.zeros_like(r_in)
    h = grid.h
    g = grid.nodes ** (nu + 0.5)
    g[0] = 0.0
    lap_h = (g[:-2] - 2.0 * g[1:-1] + g[2:]) / (h * h)
    return lap_h / g[1:-1] - (nu * nu - 0.25) / (r_in * r_in)


def assemble_tridiagonal(problem: RadialProblem, regular_core: bool = True):
    """Return (diagonal, off_diagonal) of the symmetric (N-2)x(N-2) operator."""
    grid = problem.grid
    h = grid.h
    r_in = grid.interior
    diag = 2.0 / (h * h) + problem.potential(r_in)
    if regular_core:
        diag = diag + core_correction(problem)
    off = np.full(len(r_in) - 1, -1.0 / (h * h))
    return diag, off


def sturm_count(diag, off, x: float) -> int:
    """Number of eigenvalues of the symmetric tridiagonal matrix strictly below x."""
    count = 0
    q = 1.0
    tiny = np.finfo(float).tiny
    prev_e2 = 0.0
    for i in range(len(diag)):
        q = diag[i] - x - (prev_e2 / q if i else 0.0)
        if q == 0.0:
            q = -tiny
        if q < 0:
            count += 1
        if i < len(off):
            prev_e2 = off[i] * off[i]
    return count


def _fix_sign(v: np.ndarray) -> np.ndarray:
    scale = np.max(np.abs(v))
    idx = np.flatnonzero(np.abs(v) > 1e-12 * scale)
    if idx.size and v[idx[0]] < 0:
        v = -v
    return v


def solve_lowest(problem: RadialProblem, k: int = 2, regular_core: bool = True) -> Spectrum:
    """The k algebraically smallest eigenpairs (bisection + inverse iteration)."""
    n_int = problem.grid.n_points - 2
    if int(k) != k or not 1 <= k <= problem.grid.n_points // 4:
        raise ValueError(f"k must be in [1, N/4] = [1, {problem.grid.n_points // 4}], got {k!r}")
    k = int(k)
    diag, off = assemble_tridiagonal(problem, regular_core=regular_core)
    if not np.all(np.isfinite(diag)):
        raise SolverError("non-finite operator entries")
    eps, vecs = eigh_tridiagonal(
        diag, off, select="i", select_range=(0, k - 1), lapack_driver="stebz"
    )
    vecs = vecs.T.copy()

    # residual check in units of the operator scale
    scale = max(np.max(np.abs(diag)), 2.0 * abs(off[0]))
    res = np.empty(k)
    for i, v in enumerate(vecs):
        av = diag * v
        av[:-1] += off * v[1:]
        av[1:] += off * v[:-1]
        res[i] = np.linalg.norm(av - eps[i] * v)
    if np.any(res > 1e-8 * scale) or not np.all(np.diff(eps) > 0):
        raise SolverError(f"eigenvalue iteration did not converge (n_interior={n_int})", res)

    h = problem.grid.h
    u = np.empty_like(vecs)
    for i, v in enumerate(vecs):
        u[i] = _fix_sign(v / math.sqrt(h * np.dot(v, v)))
    return Spectrum(problem=problem, eps=eps, u=u, r=problem.grid.interior)


def count_sign_changes(u: np.ndarray, rel_floor: float = 1e-10) -> int:
    """Interior sign changes, ignoring samples below rel_floor * max|u|."""
    floor = rel_floor * np.max(np.abs(u))
    s = np.sign(u[np.abs(u) > floor])
    return int(np.count_nonzero(s[1:] != s[:-1]))


@dataclass(frozen=True)
class ConvergenceReport:
    eps_base: np.ndarray
    eps_refined_mesh: np.ndarray
    eps_extended_box: np.ndarray
    rel_change_mesh: float
    rel_change_box: float
    tol: float = 1e-3

    @property
    def max_rel_change(self) -> float:
        return max(self.rel_change_mesh, self.rel_change_box)

    @property
    def passed(self) -> bool:
        return self.max_rel_change < self.tol


def _rel_change(a, b) -> float:
    return float(np.max(np.abs(b - a) / np.abs(a)))


def convergence_check(problem: RadialProblem, k: int = 1, tol: float = 1e-3) -> ConvergenceReport:
    """Re-solve with N -> 2N, and separately with r_max -> 1.3 r_max at (nearly) the same h."""
    grid = problem.grid
    base = solve_lowest(problem, k).eps
    fine = solve_lowest(problem.with_params(n_points=2 * grid.n_points), k).eps
    r_max_ext = 1.3 * grid.r_max
    n_ext = int(round((r_max_ext - grid.r_min) / grid.h)) + 1
    ext = solve_lowest(problem.with_params(r_max=r_max_ext, n_points=n_ext), k).eps
    return ConvergenceReport(
        eps_base=base,
        eps_refined_mesh=fine,
        eps_extended_box=ext,
        rel_change_mesh=_rel_change(base, fine),
        rel_change_box=_rel_change(base, ext),
        tol=tol,
    )


def rmin_sensitivity(problem: RadialProblem, k: int = 1, r_mins=(1e-4, 1e-3, 1e-2), regular_core=True):
    """eps_n for each core cutoff, keeping r_max and N fixed."""
    return {
        r0: solve_lowest(problem.with_params(r_min=r0), k, regular_core=regular_core).eps for r0 in r_mins
    }
