import csv
import subprocess
import sys

import numpy as np
import pytest

import twistscrew.cli as cli
from twistscrew.cli import ConfigError, RunConfig, main, parse_config, parse_values
from twistscrew.oracles import box_eigenvalue
from twistscrew.solver import SolverError
from twistscrew.units import ELECTRON_GAAS, energy_from_eps


def read_table(path):
    lines = [l for l in path.read_text().splitlines() if not l.startswith("#")]
    rows = list(csv.reader(lines))
    return rows[0], np.array([[float(x) for x in r] for r in rows[1:]])


def run(tmp_path, command, config="", extra=()):
    cfg = tmp_path / "run.cfg"
    cfg.write_text(config)
    out = tmp_path / "out"
    code = main(["--config", str(cfg), "--out", str(out), "--quiet", *extra, *command])
    return code, out


def test_empty_config_is_benchmark():
    cfg = parse_config("")
    assert cfg == RunConfig()
    assert (cfg.mstar_ratio, cfg.ell, cfg.kz_per_nm, cfg.omega1_nm, cfg.omega2) == (0.067, 1, 0.01, 50.0, 0.0)
    assert (cfg.B_tesla, cfg.phi, cfg.charge_sign, cfg.rmin_nm, cfg.rmax_nm) == (1.0, 0.0, -1, 1e-3, 500.0)
    assert (cfg.n_points, cfg.n_states) == (2000, 2)


def test_single_override_with_comments():
    cfg = parse_config("# twist only\nomega2 = 1.5   # trailing\n\n")
    assert cfg.omega2 == 1.5 and cfg.B_tesla == 1.0


@pytest.mark.parametrize("text", ["n_points = 8", "foo = 1", "rmin_nm = 0", "ell = 1.5", "B_tesla = abc",
                                  "charge_sign = 2", "sweep_axis = ell", "sweep_values = 1,1",
                                  "ell_window_min = 2", "ring_r0_nm = 1", "kz_per_nm = inf", "omega2"])
def test_config_errors(text):
    with pytest.raises(ConfigError):
        parse_config(text)


def test_parse_values():
    assert parse_values("0, 0.5,1") == (0.0, 0.5, 1.0)
    v = parse_values("0:2:0.02")
    assert len(v) == 101 and v[-1] == pytest.approx(2.0)
    assert parse_values("-2:2:0.1")[20] == pytest.approx(0.0, abs=1e-12)
    with pytest.raises(ConfigError):
        parse_values("0:1")
    with pytest.raises(ConfigError):
        parse_values("1:0:0.1")


def test_solve_files(tmp_path):
    code, out = run(tmp_path, ["solve"])
    assert code == 0
    head, data = read_table(out / "spectrum.csv")
    assert head == ["n", "eps_per_nm2", "E_meV"]
    assert list(data[:, 0]) == [0, 1]
    assert data[0, 2] == pytest.approx(1.78476, rel=1e-5)
    head, state = read_table(out / "state_0.csv")
    assert head == ["r_nm", "u", "density_per_nm"]
    assert len(state) == 1998
    text = (out / "spectrum.csv").read_text()
    assert "# omega1_nm = 50" in text and "# n_points = 2000" in text


def test_solve_box_matches_oracle(tmp_path):
    code, out = run(tmp_path, ["solve"], "B_tesla = 0\n")
    _, data = read_table(out / "spectrum.csv")
    exact = energy_from_eps(box_eigenvalue(1, 499.999), 0.01, ELECTRON_GAAS)
    assert data[0, 2] == pytest.approx(exact, rel=1e-3)


def test_solve_six_states(tmp_path):
    code, out = run(tmp_path, ["solve"], extra=["--states", "6"])
    _, data = read_table(out / "spectrum.csv")
    assert len(data) == 6 and np.all(np.diff(data[:, 2]) > 0)
    assert (out / "state_5.csv").exists()


def test_outputs_bitwise_stable(tmp_path):
    (tmp_path / "a").mkdir()
    (tmp_path / "b").mkdir()
    _, a = run(tmp_path / "a", ["solve"])
    _, b = run(tmp_path / "b", ["solve"])
    for name in ("spectrum.csv", "state_0.csv", "state_1.csv"):
        assert (a / name).read_bytes() == (b / name).read_bytes()
    assert not [p for p in a.iterdir() if p.name.startswith(".")]


def test_currents_benchmark(tmp_path):
    code, out = run(tmp_path, ["currents", "--plot"])
    assert code == 0
    head, data = read_table(out / "currents_0.csv")
    assert head == ["r_nm", "density_per_nm", "j_phi_reduced", "j_z_reduced"]
    assert np.all(data[:10, 3] < 0)
    head, ring = read_table(out / "ring_currents.csv")
    assert head == ["r0_nm", "delta_nm", "I_phi", "I_z"] and ring.shape == (1, 4)
    compile((out / "plot_currents_0.py").read_text(), "plot", "exec")


def test_currents_without_screw(tmp_path):
    _, out = run(tmp_path, ["currents"], "omega1_nm = 0\n")
    _, data = read_table(out / "currents_0.csv")
    np.testing.assert_allclose(data[:, 3], 0.01 * data[:, 1], rtol=0, atol=1e-12)


def test_currents_zero_index_field_free(tmp_path):
    _, out = run(tmp_path, ["currents"], "ell = 0\nkz_per_nm = 0\nB_tesla = 0\n")
    _, data = read_table(out / "currents_0.csv")
    assert np.all(data[:, 2] == 0.0)


def test_currents_annulus_outside(tmp_path):
    code, _ = run(tmp_path, ["currents"], "ring_r0_nm = 499\n")
    assert code == 2


def test_single_value_sweep_matches_solve(tmp_path):
    code, out = run(tmp_path, ["sweep"], "sweep_axis = omega2\nsweep_values = 0\n")
    head, sweep = read_table(out / "sweep.csv")
    assert head[:3] == ["axis_value", "E_0", "E_1"]
    run(tmp_path, ["solve"])
    _, spec = read_table(out / "spectrum.csv")
    np.testing.assert_array_equal(sweep[0, 1:3], spec[:, 2])


def test_sweep_needs_axis(tmp_path):
    assert run(tmp_path, ["sweep"])[0] == 2


def test_envelope_cusps(tmp_path):
    code, out = run(tmp_path, ["envelope"], "B_tesla = 0\nsweep_values = 0:2:0.02\n")
    assert code == 0
    head, data = read_table(out / "envelope.csv")
    assert head == ["phi", "E0_env", "ell0", "E1_env", "ell1"]
    e = data[:, 1]
    interior = [i for i in range(1, len(e) - 1) if e[i] < e[i - 1] and e[i] < e[i + 1]]
    np.testing.assert_allclose(data[interior, 0], [0.5, 1.5], atol=0.02)


def test_fan(tmp_path):
    code, out = run(tmp_path, ["fan", "--omega2-values", "0,1"], "sweep_values = -1,0,1\n")
    head, data = read_table(out / "fan.csv")
    assert head == ["B_tesla", "omega2", "E_0", "E_1"] and data.shape == (6, 4)
    assert data[5, 2] < data[2, 2]


def test_check_pass(tmp_path):
    code, out = run(tmp_path, ["check"])
    text = (out / "convergence.txt").read_text()
    body = [l for l in text.splitlines() if not l.startswith("#")]
    assert code == 0 and body[0] == "PASS"
    dev = float(body[1].split("=")[1])
    assert dev < 1e-3


def test_check_fail_exit_code(tmp_path):
    code, out = run(tmp_path, ["check"], "n_points = 32\nkz_per_nm = 0\nomega1_nm = 0\nell = 0\n")
    assert code == 1
    assert (out / "convergence.txt").read_text().splitlines()[-8] == "FAIL"


def test_oracle_command(tmp_path):
    code, out = run(tmp_path, ["oracle"], "B_tesla = 0\n")
    lines = [l for l in (out / "oracle.csv").read_text().splitlines() if not l.startswith("#")]
    assert lines[0] == "n,method,eps_per_nm2,E_meV,matrix_rel_dev"
    methods = {l.split(",")[1] for l in lines[1:]}
    assert methods == {"numerov", "box"}
    assert all(abs(float(l.split(",")[4])) < 1e-3 for l in lines[1:])


def test_numerical_failure_exit_code(tmp_path, monkeypatch):
    def boom(*a, **k):
        raise SolverError("synthetic")

    monkeypatch.setattr(cli, "solve_lowest", boom)
    assert run(tmp_path, ["solve"])[0] == 3


def test_missing_config_file(tmp_path):
    assert main(["--config", str(tmp_path / "nope.cfg"), "--quiet", "solve"]) == 2


def test_module_entry_point(tmp_path):
    res = subprocess.run([sys.executable, "-m", "twistscrew", "--out", str(tmp_path), "solve"],
                         capture_output=True, text=True, check=True)
    assert "E_0 =" in res.stdout
