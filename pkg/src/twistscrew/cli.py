"""Command-line front end.

    twistscrew [--config FILE] [--out DIR] [--states K] [--quiet] COMMAND

Commands: solve, currents, sweep, envelope, fan, check, oracle. The config file
is flat ``key = value`` text with ``#`` comments; omitted keys take the
benchmark defaults. Exit codes: 0 ok, 1 a requested check failed, 2 config
error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import dataclasses
import math
import os
import sys
import tempfile
from dataclasses import dataclass, fields as dc_fields
from pathlib import Path

import numpy as np

from . import __version__
from .model import Fields, Geometry, Mode
from .observables import FIG_WINDOW, annular_currents, current_profile, density
from .oracles import (
    OracleError,
    bessel_dirichlet_eigenvalue,
    box_eigenvalue,
    landau_eps,
    numerov_eigenvalue,
)
from .solver import Grid, RadialProblem, SolverError, convergence_check, solve_lowest
from .sweeps import AXES, SweepError, SweepSpec, ab_envelope, landau_fan, run_sweep
from .units import Material, energy_from_eps

EXIT_OK, EXIT_CHECK_FAILED, EXIT_CONFIG, EXIT_NUMERICAL = 0, 1, 2, 3


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    mstar_ratio: float = 0.067
    charge_sign: int = -1
    ell: int = 1
    kz_per_nm: float = 0.01
    omega1_nm: float = 50.0
    omega2: float = 0.0
    B_tesla: float = 1.0
    phi: float = 0.0
    rmin_nm: float = 1e-3
    rmax_nm: float = 500.0
    n_points: int = 2000
    n_states: int = 2
    sweep_axis: str | None = None
    sweep_values: tuple | None = None
    ell_window_min: int | None = None
    ell_window_max: int | None = None
    ring_r0_nm: float = 20.0
    ring_delta_nm: float = 5.0
    state_index: int = 0

    def to_problem(self) -> RadialProblem:
        return RadialProblem(
            geometry=Geometry(self.omega1_nm, self.omega2),
            fields=Fields(self.B_tesla, self.phi),
            mode=Mode(self.ell, self.kz_per_nm),
            grid=Grid(self.rmin_nm, self.rmax_nm, self.n_points),
            material=Material(self.mstar_ratio, self.charge_sign),
        )

    def stamp(self) -> list[str]:
        lines = [f"twistscrew {__version__}"]
        for f in dc_fields(self):
            v = getattr(self, f.name)
            if isinstance(v, tuple):
                v = ",".join(_fmt(x) for x in v)
            elif isinstance(v, float):
                v = _fmt(v)
            lines.append(f"{f.name} = {v}")
        return lines


_INT_KEYS = {"charge_sign", "ell", "n_points", "n_states", "ell_window_min", "ell_window_max", "state_index"}
_STR_KEYS = {"sweep_axis"}
_KNOWN = {f.name for f in dc_fields(RunConfig)}


def _parse_int(key, text):
    try:
        return int(text)
    except ValueError:
        raise ConfigError(f"{key}: expected an integer, got {text!r}") from None


def _parse_float(key, text):
    try:
        v = float(text)
    except ValueError:
        raise ConfigError(f"{key}: expected a number, got {text!r}") from None
    if not math.isfinite(v):
        raise ConfigError(f"{key}: value must be finite")
    return v


def parse_values(text: str, key: str = "sweep_values") -> tuple:
    """'a,b,c' or 'start:stop:step' (stop included when it lies on the grid)."""
    text = text.strip()
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ConfigError(f"{key}: range must be start:stop:step")
        start, stop, step = (_parse_float(key, p) for p in parts)
        if step <= 0 or stop < start:
            raise ConfigError(f"{key}: need step > 0 and stop >= start")
        count = int(math.floor((stop - start) / step + 1e-9)) + 1
        return tuple(start + i * step for i in range(count))
    return tuple(_parse_float(key, p) for p in text.split(",") if p.strip())


def parse_config(text: str, **overrides) -> RunConfig:
    values: dict = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw.strip()!r}")
        key, val = (s.strip() for s in line.split("=", 1))
        if key not in _KNOWN:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        if key in _INT_KEYS:
            values[key] = _parse_int(key, val)
        elif key in _STR_KEYS:
            values[key] = val
        elif key == "sweep_values":
            values[key] = parse_values(val)
        else:
            values[key] = _parse_float(key, val)
    values.update({k: v for k, v in overrides.items() if v is not None})
    cfg = RunConfig(**values)
    _validate(cfg)
    return cfg


def _validate(cfg: RunConfig) -> None:
    if not cfg.mstar_ratio > 0:
        raise ConfigError("mstar_ratio must be > 0")
    if cfg.charge_sign not in (1, -1):
        raise ConfigError("charge_sign must be +1 or -1")
    if not cfg.rmin_nm > 0:
        raise ConfigError("rmin_nm must be > 0")
    if not cfg.rmax_nm > cfg.rmin_nm:
        raise ConfigError("rmax_nm must exceed rmin_nm")
    if cfg.n_points < 16:
        raise ConfigError("n_points must be >= 16")
    if not 1 <= cfg.n_states <= cfg.n_points // 4:
        raise ConfigError(f"n_states must be in [1, {cfg.n_points // 4}]")
    if not 0 <= cfg.state_index < cfg.n_states:
        raise ConfigError("state_index must be in [0, n_states)")
    if cfg.sweep_axis is not None and cfg.sweep_axis not in AXES:
        raise ConfigError(f"sweep_axis must be one of {', '.join(AXES)}")
    if cfg.sweep_values is not None:
        v = cfg.sweep_values
        if not v:
            raise ConfigError("sweep_values is empty")
        if any(b <= a for a, b in zip(v, v[1:])):
            raise ConfigError("sweep_values must be strictly increasing")
    if (cfg.ell_window_min is None) != (cfg.ell_window_max is None):
        raise ConfigError("give both ell_window_min and ell_window_max, or neither")
    if cfg.ell_window_min is not None and cfg.ell_window_max < cfg.ell_window_min:
        raise ConfigError("ell_window_max must be >= ell_window_min")
    if cfg.ring_delta_nm < 0:
        raise ConfigError("ring_delta_nm must be >= 0")
    lo, hi = cfg.ring_r0_nm - cfg.ring_delta_nm, cfg.ring_r0_nm + cfg.ring_delta_nm
    if lo < cfg.rmin_nm or hi > cfg.rmax_nm:
        raise ConfigError("ring annulus must lie inside [rmin_nm, rmax_nm]")


# --- output -------------------------------------------------------------------------


def _fmt(x) -> str:
    if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
        return str(int(x))
    return format(float(x), ".12g")


def write_csv(path: Path, header: list[str], rows, cfg: RunConfig) -> Path:
    """Write once, atomically: temp file in the target directory, then rename."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = [f"# {s}" for s in cfg.stamp()]
    lines.append(",".join(header))
    lines.extend(",".join(_fmt(v) for v in row) for row in rows)
    _atomic_write(path, "\n".join(lines) + "\n")
    return path


def _atomic_write(path: Path, text: str) -> None:
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


_PLOT_TEMPLATE = '''"""Plot {csv} (generated by twistscrew currents)."""
import csv
import matplotlib.pyplot as plt

rows = [r for r in csv.reader(l for l in open("{csv}") if not l.startswith("#"))]
head, data = rows[0], [[float(x) for x in r] for r in rows[1:]]
data = [d for d in data if {lo} <= d[0] <= {hi}]
r = [d[0] for d in data]
fig, (a, b) = plt.subplots(1, 2, figsize=(9, 3.5))
a.plot(r, [d[2] for d in data])
a.set_xlabel("r (nm)"); a.set_ylabel("reduced j_phi")
b.plot(r, [d[3] for d in data])
b.axhline(0, lw=0.5, color="k")
b.set_xlabel("r (nm)"); b.set_ylabel("reduced j_z")
fig.tight_layout()
fig.savefig("{png}", dpi=150)
'''


# --- commands -------------------------------------------------------------------------


def cmd_solve(cfg: RunConfig, out: Path, log=print) -> int:
    spec = solve_lowest(cfg.to_problem(), cfg.n_states)
    E = spec.energies_meV
    write_csv(out / "spectrum.csv", ["n", "eps_per_nm2", "E_meV"],
              [(n, spec.eps[n], E[n]) for n in range(len(spec))], cfg)
    for n in range(len(spec)):
        write_csv(out / f"state_{n}.csv", ["r_nm", "u", "density_per_nm"],
                  zip(spec.r, spec.u[n], density(spec, n)), cfg)
    for n in range(len(spec)):
        log(f"E_{n} = {E[n]:.6f} meV  (eps = {spec.eps[n]:.6e} nm^-2)")
    return EXIT_OK


def cmd_currents(cfg: RunConfig, out: Path, plot=False, log=print) -> int:
    n = cfg.state_index
    spec = solve_lowest(cfg.to_problem(), max(cfg.n_states, n + 1))
    prof = current_profile(spec, n)
    name = f"currents_{n}.csv"
    write_csv(out / name, ["r_nm", "density_per_nm", "j_phi_reduced", "j_z_reduced"],
              zip(prof.r, prof.density, prof.j_phi, prof.j_z), cfg)
    rc = annular_currents(spec, n, cfg.ring_r0_nm, cfg.ring_delta_nm)
    write_csv(out / "ring_currents.csv", ["r0_nm", "delta_nm", "I_phi", "I_z"],
              [(rc.r0, rc.delta, rc.I_phi, rc.I_z)], cfg)
    if plot:
        script = _PLOT_TEMPLATE.format(csv=name, png=f"currents_{n}.png", lo=FIG_WINDOW[0], hi=FIG_WINDOW[1])
        _atomic_write(out / f"plot_currents_{n}.py", script)
    log(f"state {n}: I_phi = {rc.I_phi:.6e}, I_z = {rc.I_z:.6e} on [{rc.r0 - rc.delta:g}, {rc.r0 + rc.delta:g}] nm")
    return EXIT_OK


def cmd_sweep(cfg: RunConfig, out: Path, workers=None, log=print) -> int:
    if cfg.sweep_axis is None or cfg.sweep_values is None:
        raise ConfigError("sweep needs sweep_axis and sweep_values")
    res = run_sweep(SweepSpec(cfg.sweep_axis, cfg.sweep_values, cfg.to_problem(), cfg.n_states), workers)
    k = cfg.n_states
    header = ["axis_value"] + [f"E_{i}" for i in range(k)] + [f"eps_{i}" for i in range(k)]
    write_csv(out / "sweep.csv", header, res.rows(), cfg)
    log(f"sweep over {cfg.sweep_axis}: {len(res.values)} points")
    return EXIT_OK


def cmd_envelope(cfg: RunConfig, out: Path, workers=None, log=print) -> int:
    if cfg.sweep_axis not in (None, "phi"):
        raise ConfigError("envelope scans phi; set sweep_axis = phi or leave it out")
    phis = cfg.sweep_values if cfg.sweep_values is not None else parse_values("0:2:0.02")
    window = None
    if cfg.ell_window_min is not None:
        window = (cfg.ell_window_min, cfg.ell_window_max)
    env = ab_envelope(cfg.to_problem(), phis, window, cfg.n_states, workers)
    header = ["phi"]
    for n in range(cfg.n_states):
        header += [f"E{n}_env", f"ell{n}"]
    rows = []
    for i, ph in enumerate(env.phi_values):
        row = [ph]
        for n in range(cfg.n_states):
            row += [env.env_energies[n, i], int(env.minimizer_ell[n, i])]
        rows.append(row)
    write_csv(out / "envelope.csv", header, rows, cfg)
    log(f"envelope over {len(phis)} flux points, ell window {env.ell_window}"
        + ("  [minimizer on window edge]" if env.edge_hit else ""))
    return EXIT_OK


def cmd_fan(cfg: RunConfig, out: Path, omega2_values=None, workers=None, log=print) -> int:
    if cfg.sweep_axis not in (None, "B"):
        raise ConfigError("fan scans B; set sweep_axis = B or leave it out")
    Bs = cfg.sweep_values if cfg.sweep_values is not None else parse_values("-2:2:0.1")
    w2s = omega2_values if omega2_values is not None else (cfg.omega2,)
    fan = landau_fan(cfg.to_problem(), Bs, w2s, cfg.n_states, workers)
    header = ["B_tesla", "omega2"] + [f"E_{i}" for i in range(cfg.n_states)]
    write_csv(out / "fan.csv", header, fan.rows(), cfg)
    log(f"fan: {len(Bs)} fields x {len(w2s)} twists")
    return EXIT_OK


def cmd_check(cfg: RunConfig, out: Path, log=print) -> int:
    rep = convergence_check(cfg.to_problem(), cfg.n_states)
    status = "PASS" if rep.passed else "FAIL"
    lines = [
        status,
        f"max_rel_change = {_fmt(rep.max_rel_change)}",
        f"tolerance = {_fmt(rep.tol)}",
        f"rel_change_mesh (N -> 2N) = {_fmt(rep.rel_change_mesh)}",
        f"rel_change_box (r_max -> 1.3 r_max) = {_fmt(rep.rel_change_box)}",
        "eps_base = " + ",".join(_fmt(x) for x in rep.eps_base),
        "eps_refined_mesh = " + ",".join(_fmt(x) for x in rep.eps_refined_mesh),
        "eps_extended_box = " + ",".join(_fmt(x) for x in rep.eps_extended_box),
    ]
    out.mkdir(parents=True, exist_ok=True)
    _atomic_write(out / "convergence.txt", "\n".join([f"# {s}" for s in cfg.stamp()] + lines) + "\n")
    log(f"{status}: max relative change {rep.max_rel_change:.3e} (tolerance {rep.tol:g})")
    return EXIT_OK if rep.passed else EXIT_CHECK_FAILED


def cmd_oracle(cfg: RunConfig, out: Path, log=print) -> int:
    """Matrix levels next to every applicable independent reference."""
    p = cfg.to_problem()
    k = min(cfg.n_states, 9)
    spec = solve_lowest(p, k)
    rows = []

    def add(n, method, eps):
        E = energy_from_eps(eps, p.mode.kz, p.material)
        rows.append((n, method, eps, E, (spec.eps[n] - eps) / abs(eps)))

    field_free = p.geometry.omega2 == 0 and p.fields.B == 0
    L = p.grid.r_max - p.grid.r_min
    for n in range(k):
        add(n, "numerov", numerov_eigenvalue(p, n).eps)
        if field_free and abs(p.nu - 0.5) < 1e-12:
            add(n, "box", box_eigenvalue(n + 1, L))
        elif field_free:
            add(n, "bessel", bessel_dirichlet_eigenvalue(p.nu, n + 1, p.grid.r_max))
        if p.fields.B != 0 and p.mode.kz == 0 and p.geometry.omega1 == 0 and p.geometry.omega2 == 0:
            add(n, "landau", landau_eps(n, p.mode.ell - p.fields.phi, p.fields.B, p.material))
    path = out / "oracle.csv"
    out.mkdir(parents=True, exist_ok=True)
    lines = [f"# {s}" for s in cfg.stamp()] + ["n,method,eps_per_nm2,E_meV,matrix_rel_dev"]
    lines += [f"{n},{m},{_fmt(e)},{_fmt(E)},{_fmt(d)}" for n, m, e, E, d in rows]
    _atomic_write(path, "\n".join(lines) + "\n")
    for n, m, e, E, d in rows:
        log(f"n={n} {m:8s} E = {E:.6f} meV   matrix deviation {d:+.2e}")
    return EXIT_OK


# --- entry point ----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="twistscrew", description=__doc__.split("\n\n")[0])
    ap.add_argument("--config", type=Path, help="key = value configuration file")
    ap.add_argument("--out", type=Path, default=Path("."), help="output directory (default: .)")
    ap.add_argument("--states", type=int, help="number of levels (overrides n_states)")
    ap.add_argument("--quiet", action="store_true", help="no summary on stdout")
    ap.add_argument("--workers", type=int, default=None, help="process pool size for scans")
    sub = ap.add_subparsers(dest="command", required=True)
    sub.add_parser("solve", help="lowest levels and normalized states")
    c = sub.add_parser("currents", help="density, reduced currents and ring currents")
    c.add_argument("--plot", action="store_true", help="also emit a matplotlib script")
    sub.add_parser("sweep", help="levels along sweep_axis")
    sub.add_parser("envelope", help="Aharonov-Bohm envelope over phi")
    f = sub.add_parser("fan", help="levels vs B for one or more twists")
    f.add_argument("--omega2-values", type=str, default=None, help="comma list of twists")
    sub.add_parser("check", help="mesh / box convergence protocol")
    sub.add_parser("oracle", help="compare with closed forms and Numerov shooting")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    log = (lambda *a, **k: None) if args.quiet else print
    try:
        text = args.config.read_text(encoding="utf-8") if args.config else ""
        cfg = parse_config(text, n_states=args.states)
        out = args.out
        cmd = args.command
        if cmd == "solve":
            return cmd_solve(cfg, out, log=log)
        if cmd == "currents":
            return cmd_currents(cfg, out, plot=args.plot, log=log)
        if cmd == "sweep":
            return cmd_sweep(cfg, out, args.workers, log=log)
        if cmd == "envelope":
            return cmd_envelope(cfg, out, args.workers, log=log)
        if cmd == "fan":
            w2 = parse_values(args.omega2_values, "omega2-values") if args.omega2_values else None
            return cmd_fan(cfg, out, w2, args.workers, log=log)
        if cmd == "check":
            return cmd_check(cfg, out, log=log)
        if cmd == "oracle":
            return cmd_oracle(cfg, out, log=log)
    except (ConfigError, OSError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ValueError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (SolverError, OracleError, SweepError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
