"""Independent reference values: closed-form limits and a Numerov shooting solver.

Nothing here touches the finite-difference matrix path in ``solver``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .solver import Grid, RadialProblem
from .units import Material, beta_B, kinetic_coefficient


class OracleError(RuntimeError):
    pass


class Method(str, Enum):
    BOX = "box"
    BESSEL = "bessel"
    LANDAU = "landau"
    NUMEROV = "numerov"


@dataclass(frozen=True)
class OracleResult:
    eps: float
    method: Method
    residual: float
    nodes: int | None = None


def box_eigenvalue(n: int, L: float) -> float:
    """(n pi / L)^2 for the 1-based Dirichlet box mode n."""
    if n < 1 or not L > 0:
        raise ValueError("need n >= 1 and L > 0")
    return (n * math.pi / L) ** 2


# --- Bessel functions of the first kind --------------------------------------

_SERIES_MAX_X = 12.0


def _bessel_series(nu: float, x: float) -> float:
    half = 0.5 * x
    # log(x) - log(2) rather than log(x/2): x/2 underflows for subnormal x
    term = math.exp(nu * (math.log(x) - math.log(2.0)) - math.lgamma(nu + 1.0)) if nu > 0 else 1.0
    total = term
    q = -half * half
    k = 0
    while True:
        k += 1
        term *= q / (k * (k + nu))
        total += term
        if abs(term) < 1e-17 * max(abs(total), 1e-300) and k > half:
            return total


def _bessel_miller(nu: float, x: float) -> float:
    """Backward recurrence normalized with sum_k c_k J_{nu+2k}(x) = (x/2)^nu,
    c_k = (nu + 2k) Gamma(nu + k) / k!."""
    m = 2 * (int(x / 2) + 30 + int(2.0 * math.sqrt(x)))
    f_next, f = 0.0, 1e-30
    vals = [0.0] * (m + 1)
    vals[m] = f
    for j in range(m, 0, -1):
        mu = nu + j
        f_prev = 2.0 * mu / x * f - f_next
        f_next, f = f, f_prev
        vals[j - 1] = f
        if abs(f) > 1e250:
            for i in range(j - 1, m + 1):
                vals[i] *= 1e-250
            f_next *= 1e-250
            f *= 1e-250
    log_half = math.log(0.5 * x)
    norm = 0.0
    for k in range(0, m // 2 + 1):
        if k == 0:
            log_c = math.lgamma(nu + 1.0)
        else:
            log_c = math.log(nu + 2 * k) + math.lgamma(nu + k) - math.lgamma(k + 1.0)
        norm += math.exp(log_c - nu * log_half) * vals[2 * k]
    return vals[0] / norm


def bessel_j(nu: float, x: float) -> float:
    """J_nu(x) for real nu >= 0, x >= 0."""
    if nu < 0 or x < 0:
        raise ValueError("bessel_j is implemented for nu >= 0, x >= 0")
    if x == 0.0:
        return 1.0 if nu == 0 else 0.0
    if x <= _SERIES_MAX_X:
        return _bessel_series(nu, x)
    return _bessel_miller(nu, x)


def bessel_zero(nu: float, n: int, rtol: float = 1e-13) -> float:
    """n-th positive zero of J_nu by a coarse sign scan and bisection."""
    if nu < 0 or n < 1:
        raise ValueError("need nu >= 0 and n >= 1")
    step = 0.05
    x_stop = nu + (n + 2) * math.pi + 10.0
    a = max(nu, step) * 0.5 if nu > 0 else step
    fa = bessel_j(nu, a)
    found = 0
    while a < x_stop:
        b = a + step
        fb = bessel_j(nu, b)
        if fa == 0.0 or fa * fb < 0:
            found += 1
            if found == n:
                break
        a, fa = b, fb
    else:
        raise OracleError(f"could not bracket zero #{n} of J_{nu} on (0, {x_stop:.3f}]")
    if fa == 0.0:
        return a
    for _ in range(200):
        mid = 0.5 * (a + b)
        fm = bessel_j(nu, mid)
        if fm == 0.0:
            return mid
        if fa * fm < 0:
            b = mid
        else:
            a, fa = mid, fm
        if b - a <= rtol * b:
            break
    return 0.5 * (a + b)


def bessel_dirichlet_eigenvalue(nu: float, n: int, r_max: float) -> float:
    """(j_{nu,n} / r_max)^2: field-free level in a disc of radius r_max."""
    return (bessel_zero(nu, n) / r_max) ** 2


def landau_eps(n: int, m_eff: float, B: float, material: Material) -> float:
    """k_perp^2 = 2|beta_B|(2n + 1 + |m|) - 2 beta_B m, in nm^-2 (plane, kz = 0)."""
    if B == 0:
        raise ValueError("Landau levels need B != 0")
    bb = beta_B(B, material)
    return 2.0 * abs(bb) * (2 * n + 1 + abs(m_eff)) - 2.0 * bb * m_eff


def landau_level(n: int, m_eff: float, B: float, material: Material) -> float:
    """Energy in meV of radial level n with angular index m_eff = ell - phi."""
    return kinetic_coefficient(material) * landau_eps(n, m_eff, B, material)


# --- Numerov shooting ------------------------------------------------------------


def _outward(f, h2, start, u_a, u_b):
    """Numerov recurrence u'' = f u from nodes (start, start+1) to the last node.
    Returns the full list (zeros before ``start``)."""
    n = len(f)
    u = [0.0] * n
    u[start] = u_a
    u[start + 1] = u_b
    c = h2 / 12.0
    for i in range(start + 1, n - 1):
        u[i + 1] = (2.0 * (1.0 + 5.0 * c * f[i]) * u[i] - (1.0 - c * f[i - 1]) * u[i - 1]) / (
            1.0 - c * f[i + 1]
        )
        if abs(u[i + 1]) > 1e150:
            for j in range(start, i + 2):
                u[j] *= 1e-150
    return u


def _inward(f, h2, stop):
    """Numerov from u[-1] = 0, u[-2] = 1 down to node ``stop``."""
    n = len(f)
    u = [0.0] * n
    u[n - 2] = 1.0
    c = h2 / 12.0
    for i in range(n - 2, stop, -1):
        u[i - 1] = (2.0 * (1.0 + 5.0 * c * f[i]) * u[i] - (1.0 - c * f[i + 1]) * u[i + 1]) / (
            1.0 - c * f[i - 1]
        )
        if abs(u[i - 1]) > 1e150:
            for j in range(i - 1, n):
                u[j] *= 1e-150
    return u


def _sign_changes(seq) -> int:
    count = 0
    prev = 0.0
    for v in seq:
        if v == 0.0:
            continue
        if prev and (v > 0) != (prev > 0):
            count += 1
        prev = v
    return count


class _Shooter:
    """Numerov on y'' = (a - eps * w) y over equally spaced nodes.

    Uniform radius (nu >= 1/2): y = u, a = U, w = 1, Dirichlet start at r_min.
    Log radius (nu < 1/2): x = ln r, y = R = u / sqrt(r), a = r^2 U + 1/4, w = r^2,
    started on the regular branch R = r**nu. There the equation has no singular
    coefficient, which a uniform-r recurrence cannot resolve near the axis.
    """

    def __init__(self, grid: Grid, problem: RadialProblem):
        nu = problem.nu
        self.soft = nu < 0.5 - 1e-12
        if self.soft:
            x = np.linspace(math.log(grid.r_min), math.log(grid.r_max), grid.n_points)
            r = np.exp(x)
            r[0], r[-1] = grid.r_min, grid.r_max
            U = problem.potential(r)
            self.a = (r * r * U + 0.25).tolist()
            self.w = (r * r).tolist()
            self.d2 = (x[1] - x[0]) ** 2
            self.y0 = (r[0] ** nu, r[1] ** nu)
        else:
            r = grid.nodes
            U = problem.potential(r)
            self.a = U.tolist()
            self.w = [1.0] * len(r)
            self.d2 = grid.h**2
            self.y0 = (0.0, 1e-12)
        self.r = r
        self.U = U
        # no oscillation (hence no level) below min(a / w)
        self.floor = min(a / w for a, w in zip(self.a[1:], self.w[1:]))

    def _f(self, eps):
        return [a - eps * w for a, w in zip(self.a, self.w)]

    def outward(self, eps):
        return _outward(self._f(eps), self.d2, 0, *self.y0)

    def count(self, eps) -> int:
        return _sign_changes(self.outward(eps)[1:])

    def wronskian(self, eps, m):
        f = self._f(eps)
        uo = _outward(f, self.d2, 0, *self.y0)
        ui = _inward(f, self.d2, m - 1)
        so = max(abs(v) for v in uo[: m + 2])
        si = max(abs(v) for v in ui[m - 1 :])
        return (uo[m + 1] * ui[m] - ui[m + 1] * uo[m]) / (so * si), uo, ui


def numerov_eigenvalue(problem: RadialProblem, n: int = 0, h: float | None = None, rtol: float = 1e-12):
    """Level n (0-based) of -u'' + U u = eps u by two-sided Numerov shooting.

    The core starts from u(r_min) = 0 for nu >= 1/2 and from the regular Frobenius
    branch otherwise (on a log-radius grid with the same node count). States are
    isolated by node counting, then the matching Wronskian at the outer turning
    point is bisected to ``rtol``.
    """
    if not 0 <= n <= 8:
        raise ValueError("numerov_eigenvalue supports 0 <= n <= 8")
    grid = problem.grid
    if h is not None:
        grid = Grid(grid.r_min, grid.r_max, int(round((grid.r_max - grid.r_min) / h)) + 1)
    sh = _Shooter(grid, problem)
    U = sh.U

    lo = sh.floor
    lo -= 1e-6 * max(abs(lo), 1.0)
    guard = 0
    while sh.count(lo) > n:
        lo -= max(abs(lo), 1e-6)
        guard += 1
        if guard > 200:
            raise OracleError("could not find a lower bracket")
    width = max(box_eigenvalue(n + 1, grid.r_max - grid.r_min), 1e-12)
    hi = lo + width
    guard = 0
    while sh.count(hi) < n + 1:
        width *= 2.0
        hi = lo + width
        guard += 1
        if guard > 200:
            raise OracleError(f"could not bracket level {n} above {lo:.6g}")

    # isolate level n by node counting
    for _ in range(400):
        c_lo, c_hi = sh.count(lo), sh.count(hi)
        if c_lo == n and c_hi == n + 1:
            break
        mid = 0.5 * (lo + hi)
        if sh.count(mid) <= n:
            lo = mid
        else:
            hi = mid
    else:
        raise OracleError(f"node counting failed to isolate level {n}")

    mid = 0.5 * (lo + hi)
    n_nodes = len(U)
    allowed = np.flatnonzero(U[: n_nodes - 3] < mid)
    m = int(allowed[-1]) if allowed.size else n_nodes // 2
    if m >= n_nodes - 4 or m <= 2:
        m = n_nodes // 2

    w_lo = sh.wronskian(lo, m)[0]
    w_hi = sh.wronskian(hi, m)[0]
    if w_lo * w_hi > 0:
        raise OracleError(f"matching defect does not change sign on [{lo:.12g}, {hi:.12g}]")
    for _ in range(300):
        mid = 0.5 * (lo + hi)
        w_mid = sh.wronskian(mid, m)[0]
        if w_mid == 0.0:
            lo = hi = mid
            break
        if (w_mid > 0) == (w_lo > 0):
            lo, w_lo = mid, w_mid
        else:
            hi = mid
        if hi - lo <= rtol * abs(mid):
            break
    eps = 0.5 * (lo + hi)

    _, uo, ui = sh.wronskian(eps, m)
    scale = uo[m] / ui[m] if ui[m] != 0.0 else uo[m + 1] / ui[m + 1]
    combined = uo[: m + 1] + [scale * v for v in ui[m + 1 :]]
    nodes = _sign_changes(combined[1:-1])
    if nodes != n:
        raise OracleError(f"node count {nodes} does not match requested level {n}")
    return OracleResult(eps=eps, method=Method.NUMEROV, residual=(hi - lo) / abs(eps) if eps else hi - lo, nodes=nodes)
