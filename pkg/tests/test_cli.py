import numpy as np
import pytest

from curlfree import cli
from curlfree.boundary import BoundarySpec
from curlfree.cases import get_case, make_grid
from curlfree.config import ConfigError, load_config, parse_config
from curlfree.driver import Simulation, compute_dt, convergence_study, run
from curlfree.eos import EosKind
from curlfree.grid import StaggeredGrid
from curlfree.io import load_checkpoint, read_centerline, read_vtk, write_vtk
from curlfree.model import conserved_from_primitives
from curlfree.muscl import NumericalError


def _write(tmp_path, text, name="run.ini"):
    path = tmp_path / name
    path.write_text(text)
    return path


# -- configuration ---------------------------------------------------------

def test_defaults_come_from_the_case():
    cfg = parse_config("case = dambreak")
    assert (cfg.nx, cfg.ny, cfg.cfl, cfg.t_end) == (480, 240, 0.5, 0.4)
    assert cfg.gravity == (0.0, -9.8)
    assert cfg.phases.second.kind is EosKind.STIFFENED
    assert cfg.bc.has_wall() and cfg.curl_free


def test_sections_and_overrides():
    text = """
[run]
case = vortex
nx = 32
ny = 32
curl_free = off
[phase2]
gamma = 1.6
[bc]
x = periodic
"""
    cfg = parse_config(text, ["nx=16", "t_end=0.5", "gravity.y=-1"])
    assert cfg.nx == 16 and cfg.ny == 32 and cfg.t_end == 0.5
    assert cfg.curl_free is False
    assert cfg.phases.second.gamma == 1.6 and cfg.phases.first.gamma == 1.4
    assert cfg.gravity == (0.0, -1.0)
    # round trip through the echoed file
    again = parse_config(cfg.to_ini())
    assert again == cfg


@pytest.mark.parametrize("text, overrides", [
    ("case = vortex\nbogus = 1", None),
    ("case = vortex", ["cfl=0"]),
    ("case = vortex", ["cfl=1.5"]),
    ("case = vortex", ["t_end=-1"]),
    ("case = vortex", ["nx=2"]),
    ("case = vortex", ["bc.x_lo=periodic", "bc.x_hi=wall"]),
    ("case = nope", None),
    ("nx = 4", None),
    ("case = vortex", ["nx"]),
    ("case = vortex", ["phase2.eos=stiffened"]),
    ("case = vortex", ["curl_free=maybe"]),
])
def test_config_errors(text, overrides):
    with pytest.raises(ConfigError):
        parse_config(text, overrides)


def test_leading_comment_before_section():
    cfg = parse_config("# comment\n\n[run]\ncase = vortex\nnx = 8\nny = 8\n")
    assert cfg.nx == 8
    assert parse_config("# comment\ncase = vortex\nnx = 8\nny = 8\n").nx == 8


def test_shipped_configs_parse():
    from pathlib import Path
    for path in sorted((Path(__file__).parent.parent / "configs").glob("*.ini")):
        assert load_config(path).t_end > 0


def test_missing_config_file(tmp_path):
    with pytest.raises(ConfigError):
        load_config(tmp_path / "absent.ini")
    assert cli.main(["run", "--config", str(tmp_path / "absent.ini")]) == cli.EXIT_CONFIG


def test_output_dir_from_environment(monkeypatch, tmp_path):
    monkeypatch.setenv("CURLFREE_OUTPUT_DIR", str(tmp_path / "env"))
    assert parse_config("case = vortex").output_dir == str(tmp_path / "env")


# -- time step -------------------------------------------------------------

def test_compute_dt_example(same_pair):
    grid = StaggeredGrid(4, 4, 4.0, 4.0)
    Q = conserved_from_primitives(np.full(grid.center_shape, 0.5), 1.0, 1.0,
                                  np.zeros((2,) + grid.center_shape))
    wc = np.zeros((2,) + grid.center_shape)
    dt = compute_dt(Q, wc, grid, same_pair, 0.5)
    assert dt == pytest.approx(0.5 / np.sqrt(1.4), rel=1e-14)
    assert dt == pytest.approx(0.4226, abs=1e-4)
    assert compute_dt(Q, wc, grid, same_pair, 1.0) == pytest.approx(2 * dt, rel=1e-15)


def test_compute_dt_guard(same_pair):
    grid = StaggeredGrid(4, 4, 4.0, 4.0)
    Q = conserved_from_primitives(np.full(grid.center_shape, 0.5), 1.0, 1.0,
                                  np.zeros((2,) + grid.center_shape))
    Q[3, 3, 3] = 1e20
    with pytest.raises(NumericalError):
        compute_dt(Q, np.zeros((2,) + grid.center_shape), grid, same_pair, 0.5)


# -- snapshots -------------------------------------------------------------

def test_vtk_round_trip(tmp_path, rng):
    grid = StaggeredGrid(5, 3, 1.0, 0.6, -0.5, 0.0)
    fields = {"rho": rng.random((5, 3)), "u": rng.normal(size=(2, 5, 3))}
    path = write_vtk(tmp_path / "s.vtk", grid, fields, t=0.25)
    data = read_vtk(path)
    assert data["cells"] == 15 and (data["nx"], data["ny"]) == (5, 3)
    assert "CELL_DATA 15" in path.read_text()
    np.testing.assert_array_equal(data["fields"]["rho"], fields["rho"])
    np.testing.assert_array_equal(data["fields"]["u"], fields["u"])
    assert data["origin"] == (-0.5, 0.0)


def test_run_outputs_and_centerline(tmp_path):
    out = tmp_path / "rp"
    cfg = _write(tmp_path, f"case = rp1d\nnx = 64\nny = 1\nt_end = 0.05\noutput_dir = {out}\n")
    assert cli.main(["run", "--config", str(cfg)]) == 0
    for name in ("config_used.ini", "diagnostics.csv", "snapshot_final.vtk",
                 "centerline_final.csv", "checkpoint_final.npz"):
        assert (out / name).exists()
    chk = load_checkpoint(out / "checkpoint_final.npz")
    line = read_centerline(out / "centerline_final.csv")
    grid = make_grid(get_case("rp1d"), 64, 1)
    ix, iy = grid.interior
    np.testing.assert_array_equal(line["alpha1"], chk["Q"][0, ix, iy][:, 0])
    assert chk["t"] == 0.05
    vtk = read_vtk(out / "snapshot_final.vtk")
    np.testing.assert_array_equal(vtk["fields"]["alpha1"][:, 0], line["alpha1"])


def test_vortex_diagnostics_curl_at_machine_zero(tmp_path):
    out = tmp_path / "v"
    cfg = parse_config(f"case = vortex\nnx = 32\nny = 32\nt_end = 0.2\noutput_dir = {out}\n")
    assert run(cfg).status == 0
    rows = np.genfromtxt(out / "diagnostics.csv", delimiter=",", names=True)
    assert np.all(rows["curl_l1"] <= 1e-13)
    assert rows["t"][-1] == 0.2


def test_determinism(tmp_path):
    texts = []
    for k in range(2):
        out = tmp_path / f"d{k}"
        cfg = parse_config(f"case = potential_init\nnx = 24\nny = 24\nt_end = 0.05\noutput_dir = {out}\n")
        assert run(cfg).status == 0
        texts.append((out / "diagnostics.csv").read_bytes())
    assert texts[0] == texts[1]


def test_restart_matches_uninterrupted_run(tmp_path):
    base = "case = explosion\nnx = 32\nny = 32\nt_end = 0.04\noutput_every = 0.02\n"
    full = tmp_path / "full"
    assert run(parse_config(base + f"output_dir = {full}\n")).status == 0
    resumed = tmp_path / "resumed"
    cfg = parse_config(base + f"output_dir = {resumed}\nrestart = {full / 'checkpoint_0001.npz'}\n")
    assert run(cfg).status == 0
    a = load_checkpoint(full / "checkpoint_final.npz")
    b = load_checkpoint(resumed / "checkpoint_final.npz")
    assert a["t"] == b["t"] and a["step"] == b["step"]
    assert np.max(np.abs(a["Q"] - b["Q"])) <= 1e-13
    assert np.max(np.abs(a["w"] - b["w"])) <= 1e-13


def test_uniform_periodic_run_is_bit_identical(ideal_pair):
    grid = StaggeredGrid(12, 10, 1.0, 1.0)
    Q = conserved_from_primitives(np.full(grid.center_shape, 0.3), 1.2, 0.7,
                                  np.ones((2,) + grid.center_shape) * np.array([0.4, -0.25])[:, None, None])
    w = np.zeros((2,) + grid.vertex_shape)
    sim = Simulation(grid, ideal_pair, BoundarySpec.from_axes("periodic", "periodic"), Q, w)
    Q0 = sim.Q.copy()
    for _ in range(100):
        sim.step(sim.compute_dt(0.4))
    inner = (slice(None),) + grid.interior
    assert np.array_equal(sim.Q[inner], Q0[inner])
    assert not sim.w.any()


# -- exit codes and subcommands ------------------------------------------------

def test_numerical_failure_exit_code(tmp_path):
    # an absurd viscosity speed makes the explicit vertex update blow up
    out = tmp_path / "boom"
    cfg = _write(tmp_path, f"case = potential_init\nnx = 16\nny = 16\nc_h = 1e8\noutput_dir = {out}\n")
    assert cli.main(["run", "--config", str(cfg)]) == cli.EXIT_NUMERICAL
    assert (out / "checkpoint_last_valid.npz").exists()
    chk = load_checkpoint(out / "checkpoint_last_valid.npz")
    assert np.all(np.isfinite(chk["Q"])) and np.all(np.isfinite(chk["w"]))


def test_config_error_exit_code(tmp_path):
    cfg = _write(tmp_path, "case = vortex\ncfl = 2\n")
    assert cli.main(["run", "--config", str(cfg)]) == cli.EXIT_CONFIG


def test_reference_subcommand(tmp_path, monkeypatch):
    monkeypatch.setenv("CURLFREE_OUTPUT_DIR", str(tmp_path))
    assert cli.main(["reference", "--radial", "off", "--n", "64", "--t-end", "0.05"]) == 0
    prof = read_centerline(tmp_path / "reference_1d_64.csv")
    assert prof["x"].size == 64
    out = tmp_path / "radial.csv"
    assert cli.main(["reference", "--radial", "on", "--n", "64", "--t-end", "0.02",
                     "--output", str(out)]) == 0
    assert read_centerline(out)["x"][0] == pytest.approx(0.5 / 64)
    assert cli.main(["reference", "--n", "2"]) == cli.EXIT_CONFIG


def test_converge_needs_two_meshes(tmp_path):
    cfg = _write(tmp_path, f"case = vortex\noutput_dir = {tmp_path}\n")
    assert cli.main(["converge", "--config", str(cfg), "--meshes", "32"]) == cli.EXIT_CONFIG
    other = _write(tmp_path, f"case = explosion\noutput_dir = {tmp_path}\n", "e.ini")
    assert cli.main(["converge", "--config", str(other), "--meshes", "16,32"]) == cli.EXIT_CONFIG


def test_converge_initial_data_has_zero_error(tmp_path):
    cfg = parse_config(f"case = vortex\nmax_steps = 0\noutput_dir = {tmp_path}\n")
    table = convergence_study(cfg, [16, 32])
    for errs in table.errors.values():
        assert max(errs) <= 1e-14  # round-off of the primitive recovery only


def test_converge_subcommand_writes_table(tmp_path, capsys):
    cfg = _write(tmp_path, f"case = vortex\nt_end = 0.05\noutput_dir = {tmp_path}\n")
    assert cli.main(["converge", "--config", str(cfg), "--meshes", "16,32"]) == 0
    assert (tmp_path / "convergence.csv").exists()
    assert "O(alpha1)" in capsys.readouterr().out
