"""Parameter scans, Aharonov-Bohm envelopes, the screw reindexing check and
Landau-fan tables. Every scan reuses the base problem's grid."""

from __future__ import annotations

import math
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .model import angular_bracket
from .observables import annular_currents
from .solver import RadialProblem, solve_lowest
from .units import kinetic_coefficient

AXES = ("omega1", "omega2", "B", "phi", "kz")


class SweepError(RuntimeError):
    pass


class EdgeMinimizerWarning(UserWarning):
    """An envelope minimizer sits on the edge of the azimuthal window."""


@dataclass(frozen=True)
class SweepSpec:
    axis: str
    values: tuple
    base_problem: RadialProblem = field(default_factory=RadialProblem)
    n_states: int = 2

    def __post_init__(self):
        if self.axis not in AXES:
            raise ValueError(f"axis must be one of {AXES}, got {self.axis!r}")
        vals = tuple(float(v) for v in self.values)
        if not vals:
            raise ValueError("sweep needs at least one value")
        if not all(math.isfinite(v) for v in vals):
            raise ValueError("sweep values must be finite")
        if any(b <= a for a, b in zip(vals, vals[1:])):
            raise ValueError("sweep values must be strictly increasing")
        object.__setattr__(self, "values", vals)


@dataclass(frozen=True, eq=False)
class SweepResult:
    axis: str
    values: np.ndarray
    eps: np.ndarray  # (n_values, n_states), nm^-2
    energies: np.ndarray  # meV

    def rows(self):
        for v, e, eps in zip(self.values, self.energies, self.eps):
            yield (float(v), *map(float, e), *map(float, eps))


def _solve_point(args):
    problem, k = args
    return solve_lowest(problem, k).eps


def _solve_many(problems, k, workers=None, labels=None):
    jobs = [(p, k) for p in problems]
    try:
        if workers and workers > 1 and len(jobs) > 1:
            with ProcessPoolExecutor(max_workers=workers) as pool:
                # map() yields in submission order whatever the completion order
                return list(pool.map(_solve_point, jobs))
        out = []
        for i, job in enumerate(jobs):
            try:
                out.append(_solve_point(job))
            except Exception as exc:
                where = labels[i] if labels else f"point {i}"
                raise SweepError(f"solve failed at {where}: {exc}") from exc
        return out
    except SweepError:
        raise
    except Exception as exc:
        raise SweepError(f"parallel sweep failed: {exc}") from exc


def run_sweep(spec: SweepSpec, workers: int | None = None) -> SweepResult:
    problems = [spec.base_problem.with_params(**{spec.axis: v}) for v in spec.values]
    labels = [f"{spec.axis}={v:g}" for v in spec.values]
    eps = np.array(_solve_many(problems, spec.n_states, workers, labels))
    p = spec.base_problem
    if spec.axis == "kz":
        kz = np.asarray(spec.values)[:, None]
    else:
        kz = p.mode.kz
    energies = kinetic_coefficient(p.material) * (eps + kz * kz)
    return SweepResult(spec.axis, np.asarray(spec.values), eps, energies)


# --- Aharonov-Bohm envelope -----------------------------------------------------


@dataclass(frozen=True, eq=False)
class EnvelopeResult:
    phi_values: np.ndarray
    env_energies: np.ndarray  # (n_states, n_phi), meV
    minimizer_ell: np.ndarray  # (n_states, n_phi)
    ell_window: tuple
    branches: np.ndarray  # (n_ell, n_phi, n_states), meV
    edge_hit: bool = False

    @property
    def ells(self) -> np.ndarray:
        return np.arange(self.ell_window[0], self.ell_window[1] + 1)


def default_ell_window(problem: RadialProblem, phi_values) -> tuple:
    shift = problem.mode.kz * problem.geometry.omega1
    lo = math.floor(shift + min(phi_values)) - 3
    hi = math.ceil(shift + max(phi_values)) + 3
    return lo, hi


def _envelope_once(base, phi_values, window, n_states, workers):
    ells = range(window[0], window[1] + 1)
    problems = [base.with_params(ell=l, phi=ph) for l in ells for ph in phi_values]
    labels = [f"ell={l}, phi={ph:g}" for l in ells for ph in phi_values]
    eps = np.array(_solve_many(problems, n_states, workers, labels))
    eps = eps.reshape(len(ells), len(phi_values), n_states)
    energies = kinetic_coefficient(base.material) * (eps + base.mode.kz**2)
    # argmin returns the first (smallest ell) on exact ties
    idx = np.argmin(energies, axis=0)  # (n_phi, n_states)
    env = np.take_along_axis(energies, idx[None], axis=0)[0]
    return energies, env.T, (idx + window[0]).T


def ab_envelope(
    base_problem: RadialProblem,
    phi_values,
    ell_window: tuple | None = None,
    n_states: int = 2,
    workers: int | None = None,
) -> EnvelopeResult:
    """E_n^env(phi) = min over ell in the window of E_{n,ell}(phi)."""
    phi_values = np.asarray(phi_values, dtype=float)
    window = tuple(ell_window) if ell_window is not None else default_ell_window(base_problem, phi_values)
    if window[1] < window[0]:
        raise ValueError(f"empty azimuthal window {window}")
    widened = False
    while True:
        branches, env, argl = _envelope_once(base_problem, phi_values, window, n_states, workers)
        at_edge = window[1] > window[0] and (np.any(argl == window[0]) or np.any(argl == window[1]))
        if not at_edge:
            break
        if widened or ell_window is not None:
            warnings.warn(
                f"envelope minimizer on the edge of ell window {window}", EdgeMinimizerWarning, stacklevel=2
            )
            break
        window = (window[0] - 3, window[1] + 3)
        widened = True
    return EnvelopeResult(phi_values, env, argl, window, branches, edge_hit=bool(at_edge))


def envelope_minima(result: EnvelopeResult, n: int = 0) -> np.ndarray:
    """phi values of discrete local minima of the envelope (ends count one-sided)."""
    e = result.env_energies[n]
    phi = result.phi_values
    keep = []
    for i in range(len(e)):
        left = e[i - 1] if i > 0 else math.inf
        right = e[i + 1] if i < len(e) - 1 else math.inf
        if e[i] <= left and e[i] <= right and (left < math.inf or right < math.inf):
            if e[i] < left or e[i] < right:
                keep.append(phi[i])
    return np.asarray(keep)


def minimizer_steps(result: EnvelopeResult, n: int = 0):
    """[(phi_before, phi_after, delta_ell)] wherever the minimizing ell changes."""
    ell = result.minimizer_ell[n]
    phi = result.phi_values
    return [(phi[i], phi[i + 1], int(ell[i + 1] - ell[i])) for i in np.flatnonzero(np.diff(ell))]


def envelope_period_deviation(result: EnvelopeResult, n: int = 0, period: float = 1.0) -> float:
    """max relative |E(phi + period) - E(phi)| over grid pairs exactly one period apart."""
    phi = result.phi_values
    step = np.median(np.diff(phi))
    shift = int(round(period / step))
    if shift <= 0 or shift >= len(phi) or not np.allclose(phi[shift:] - phi[:-shift], period, atol=1e-9):
        raise ValueError("phi grid does not contain points one period apart")
    e = result.env_energies[n]
    return float(np.max(np.abs(e[shift:] - e[:-shift]) / np.abs(e[:-shift])))


# --- symmetry checks and fans ---------------------------------------------------


def reindex_check(base_problem: RadialProblem, n_states: int = 2, shift: float | None = None) -> float:
    """max_n |E_n(omega1 + shift; ell) - E_n(omega1; ell - 1)| / |E_n|, shift = 1/kz by default."""
    kz = base_problem.mode.kz
    if kz == 0:
        raise ValueError("reindexing needs kz != 0")
    d = 1.0 / kz if shift is None else shift
    p = base_problem
    a = solve_lowest(p.with_params(omega1=p.geometry.omega1 + d), n_states).energies_meV
    b = solve_lowest(p.with_params(ell=p.mode.ell - 1), n_states).energies_meV
    return float(np.max(np.abs(a - b) / np.abs(b)))


@dataclass(frozen=True, eq=False)
class FanResult:
    B_values: np.ndarray
    omega2_values: np.ndarray
    energies: np.ndarray  # (n_omega2, n_B, n_states), meV

    def rows(self):
        for j, w2 in enumerate(self.omega2_values):
            for i, B in enumerate(self.B_values):
                yield (float(B), float(w2), *map(float, self.energies[j, i]))

    def odd_part(self) -> np.ndarray:
        """(E(B) - E(-B)) / 2 for each B present with its mirror; NaN otherwise."""
        out = np.full_like(self.energies, np.nan)
        for i, B in enumerate(self.B_values):
            mirror = np.flatnonzero(np.isclose(self.B_values, -B, rtol=0, atol=1e-12))
            if mirror.size:
                out[:, i] = 0.5 * (self.energies[:, i] - self.energies[:, mirror[0]])
        return out


def landau_fan(base_problem, B_values, omega2_values, n_states=2, workers=None) -> FanResult:
    B_values = np.asarray(B_values, dtype=float)
    omega2_values = np.asarray(omega2_values, dtype=float)
    if B_values.size == 0 or omega2_values.size == 0:
        raise ValueError("fan needs nonempty B and omega2 lists")
    problems = [base_problem.with_params(B=B, omega2=w) for w in omega2_values for B in B_values]
    labels = [f"B={B:g}, omega2={w:g}" for w in omega2_values for B in B_values]
    eps = np.array(_solve_many(problems, n_states, workers, labels))
    energies = kinetic_coefficient(base_problem.material) * (eps + base_problem.mode.kz**2)
    return FanResult(B_values, omega2_values, energies.reshape(len(omega2_values), len(B_values), n_states))


def twist_slope(problem: RadialProblem, d_omega2: float = 1e-3, n: int = 0) -> float:
    """One-sided dE_n/d omega2 (meV per unit twist) at the problem's omega2."""
    a = solve_lowest(problem, n + 1).energies_meV[n]
    b = solve_lowest(problem.with_params(omega2=problem.geometry.omega2 + d_omega2), n + 1).energies_meV[n]
    return (b - a) / d_omega2


def twist_slope_hellmann_feynman(problem: RadialProblem, n: int = 0) -> float:
    """dE_n/d omega2 from <u_n| dU/d omega2 |u_n> on the discrete eigenvector."""
    spec = solve_lowest(problem, n + 1)
    r = spec.r
    b = angular_bracket(problem.geometry, problem.fields, problem.mode, r, problem.material)
    dU = -2.0 * problem.mode.kz * b / r
    u = spec.u[n]
    d_eps = problem.grid.h * np.sum(u * u * dU)
    return kinetic_coefficient(problem.material) * d_eps


# --- persistent (ring) currents vs flux -----------------------------------------


@dataclass(frozen=True, eq=False)
class FluxScan:
    phi_values: np.ndarray
    ell: np.ndarray
    I_phi: np.ndarray
    I_z: np.ndarray
    r0: float
    delta: float


def ring_current_flux_scan(
    base_problem: RadialProblem,
    phi_values,
    r0: float,
    delta: float,
    ell_window: tuple | None = None,
    n: int = 0,
) -> FluxScan:
    """Annular currents of the level-n ground branch (the envelope minimizer) vs phi."""
    env = ab_envelope(base_problem, phi_values, ell_window, n_states=n + 1)
    I_phi, I_z = [], []
    for ph, l in zip(env.phi_values, env.minimizer_ell[n]):
        spec = solve_lowest(base_problem.with_params(ell=int(l), phi=float(ph)), n + 1)
        rc = annular_currents(spec, n, r0, delta)
        I_phi.append(rc.I_phi)
        I_z.append(rc.I_z)
    return FluxScan(env.phi_values, env.minimizer_ell[n].copy(), np.array(I_phi), np.array(I_z), r0, delta)
