import json
import os
import struct
import subprocess
from pathlib import Path

import numpy as np
import pytest

import css_peaks as cp

SMALL = {
    "potential": {
        "wells": [{"a": [0.0, 0.0], "v_at_a": 1.0, "b": [1.0, 1.0], "m": 2.0, "eta": 0.9}],
        "v_inf": 3.0,
    },
    "p": 4.0,
    "eps_list": [0.2],
    "grid": {"n": 128, "L": 1.28},
    "solver": {"tol": 1e-10, "max_iter": 40},
    "delta": 0.2,
}


@pytest.fixture(scope="module")
def config():
    return cp.Config.from_json(json.dumps(SMALL))


def cli():
    path = os.environ.get("CSS_PEAKS_CLI")
    if not path:
        pytest.skip("CSS_PEAKS_CLI not set")
    return path


def test_ground_state_identities():
    prof = cp.solve_ground_state(1.0, 4.0)
    I = prof.integrals()
    assert abs(I["dirichlet"] + I["mass2"] - I["massp"]) / I["massp"] < 1e-5
    assert prof.ode_residual() < 1e-6
    assert prof(0.0) == pytest.approx(prof.u0)
    assert prof.u.shape == prof.r.shape


def test_solve_single_well(config):
    grid = config.grid
    profiles = cp.well_profiles(config)
    w = cp.build_ansatz(grid, profiles, [(0.0, 0.0)], 0.2)
    assert w.shape == (grid.n, grid.n)
    rep = cp.newton_solve(w, config, 0.2)
    assert rep["converged"]
    assert rep["residual_norm"] < 1e-10
    assert np.linalg.norm(cp.residual(rep["u"], config, 0.2)) < 1e-8 * np.linalg.norm(rep["u"])
    e = cp.energy(rep["u"], config, 0.2)
    assert e["total"] == pytest.approx(
        e["kinetic"] + e["potential"] + e["nonlinear"] + e["gauge1"] + e["gauge2"]
    )
    assert cp.tangency_residual(rep["u"], grid) < 1e-3


def test_gauge_and_shape_errors(config):
    grid = config.grid
    u = cp.build_ansatz(grid, cp.well_profiles(config), [(0.0, 0.0)], 0.2)
    a0, a1, a2 = cp.gauge_fields(u, grid)
    assert a1.shape == u.shape
    # A1 is odd in x2 and A2 odd in x1 for a centred radial bump.
    assert abs(a1[grid.n // 2 + 10, grid.n // 2]) > 0
    with pytest.raises(cp.PreconditionError):
        cp.gauge_fields(np.zeros((8, 8)), grid)


def test_snapshot_layout(tmp_path, config):
    grid = config.grid
    u = np.arange(grid.n * grid.n, dtype=float).reshape(grid.n, grid.n)
    path = tmp_path / "f.cssf"
    cp.write_snapshot(u, grid, path)
    raw = path.read_bytes()
    assert raw[:4] == b"CSSF"
    n, L = struct.unpack("<Id", raw[4:16])
    assert (n, L) == (grid.n, grid.L)
    assert len(raw) == 16 + 8 * n * n
    back, g = cp.read_snapshot(path)
    assert g.n == grid.n
    assert np.array_equal(back, u)


def test_invalid_config():
    bad = dict(SMALL, eps_list=[])
    with pytest.raises(cp.PreconditionError):
        cp.Config.from_json(json.dumps(bad))


def test_cli_usage_errors(tmp_path):
    exe = cli()
    assert subprocess.run([exe, "ground-state", "--p", "2", "--out", str(tmp_path)]).returncode == 2
    assert subprocess.run([exe, "no-such-command"]).returncode == 2
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(dict(SMALL, eps_list=[])))
    assert subprocess.run([exe, "solve", "--config", str(bad), "--out", str(tmp_path)]).returncode == 2
    good = tmp_path / "good.json"
    good.write_text(json.dumps(SMALL))
    missing = tmp_path / "missing.cssf"
    rc = subprocess.run(
        [exe, "pohozaev", "--config", str(good), "--out", str(tmp_path), "--snapshot", str(missing), "--eps", "0.2"]
    ).returncode
    assert rc == 2


def test_cli_ground_state_files(tmp_path):
    exe = cli()
    rc = subprocess.run([exe, "ground-state", "--v0", "1", "--p", "4", "--out", str(tmp_path)]).returncode
    assert rc == 0
    header = json.loads((tmp_path / "ground_state.json").read_text())
    assert header["v0"] == 1.0
    lines = (tmp_path / "ground_state.csv").read_text().splitlines()
    assert len(lines) > 1000


def test_cli_solve_is_byte_identical(tmp_path):
    exe = cli()
    cfg = tmp_path / "small.json"
    cfg.write_text(json.dumps(SMALL))
    outs = []
    for name in ("a", "b"):
        out = tmp_path / name
        rc = subprocess.run([exe, "solve", "--config", str(cfg), "--out", str(out), "--seed", "7"]).returncode
        assert rc == 0
        outs.append(out)
    files = sorted(p.name for p in outs[0].iterdir())
    assert "summary.csv" in files
    assert files == sorted(p.name for p in outs[1].iterdir())
    for name in files:
        assert (outs[0] / name).read_bytes() == (outs[1] / name).read_bytes()
    header = (outs[0] / "summary.csv").read_text().splitlines()[0]
    assert header == "eps,total_energy,phi_norm,peak_offset_1,residual_norm,iterations"
