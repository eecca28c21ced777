import json
import subprocess
import sys

import numpy as np
import pytest

from symtop.cli import main

FREE_TOP_REDUCED = {
    "space": "reduced",
    "body": {"M": 1.0, "I1": 1.0, "I3": 0.5},
    "potential": {"type": "zero"},
    "initial": {
        "x": [0.1, -0.2, 0.3],
        "p": [0.2, 0.1, -0.1],
        "nu": [0.8944271909999159, 0.0, 0.4472135954999579],
        "pi": [0.2, 0.3, 0.9],
    },
    "dt": 1e-3,
    "T": 0.5,
    "sample_stride": 50,
}

FREE_TOP_FULL = {
    "space": "full",
    "body": {"M": 1.0, "I1": 1.0, "I3": 0.5},
    "potential": {"type": "zero"},
    "initial": {
        "x": [0.1, -0.2, 0.3],
        "p": [0.2, 0.1, -0.1],
        "axis_angle": [0.4, -0.3, 0.8],
        "pi": [0.2, 0.3, 0.9],
    },
    "dt": 1e-3,
    "T": 0.5,
    "sample_stride": 50,
}


def write_config(tmp_path, cfg, name="config.json"):
    path = tmp_path / name
    path.write_text(json.dumps(cfg))
    return str(path)


def read_csv(path):
    with open(path) as f:
        header = f.readline().strip().split(",")
        rows = [list(map(float, line.strip().split(","))) for line in f]
    return header, np.array(rows)


def test_simulate_reduced_writes_csv(tmp_path):
    cfg = write_config(tmp_path, FREE_TOP_REDUCED)
    out = str(tmp_path / "traj.csv")
    assert main(["simulate", "--config", cfg, "--out", out]) == 0
    header, rows = read_csv(out)
    assert header == [
        "t", "x1", "x2", "x3", "p1", "p2", "p3", "nu1", "nu2", "nu3",
        "pi1", "pi2", "pi3", "energy", "C1", "C2", "ortho_defect",
    ]
    c1 = rows[:, header.index("C1")]
    assert np.abs(c1 - 1.0).max() <= 1e-12
    # reduced runs emit a zero orthogonality-defect column
    assert np.all(rows[:, header.index("ortho_defect")] == 0.0)
    assert rows[0, 0] == 0.0 and abs(rows[-1, 0] - 0.5) < 1e-12


def test_simulate_full_space(tmp_path):
    cfg = write_config(tmp_path, FREE_TOP_FULL)
    out = str(tmp_path / "traj.csv")
    assert main(["simulate", "--config", cfg, "--out", out]) == 0
    header, rows = read_csv(out)
    assert np.abs(rows[:, header.index("C1")] - 1.0).max() <= 1e-12
    assert rows[:, header.index("ortho_defect")].max() <= 1e-12


def test_csv_bit_stable(tmp_path):
    cfg = write_config(tmp_path, FREE_TOP_REDUCED)
    out1, out2 = str(tmp_path / "a.csv"), str(tmp_path / "b.csv")
    assert main(["simulate", "--config", cfg, "--out", out1]) == 0
    assert main(["simulate", "--config", cfg, "--out", out2]) == 0
    assert open(out1, "rb").read() == open(out2, "rb").read()


def test_simulate_malformed_json(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{not json")
    assert main(["simulate", "--config", str(path), "--out", str(tmp_path / "o.csv")]) == 2


def test_simulate_missing_config():
    assert main(["simulate", "--config", "/nonexistent.json", "--out", "/tmp/o.csv"]) == 2


def test_simulate_rejects_zero_horizon(tmp_path):
    cfg = dict(FREE_TOP_REDUCED, T=0.0)
    assert main(["simulate", "--config", write_config(tmp_path, cfg), "--out", str(tmp_path / "o.csv")]) == 2


def test_simulate_rejects_unknown_key(tmp_path):
    cfg = dict(FREE_TOP_REDUCED, extra=1)
    assert main(["simulate", "--config", write_config(tmp_path, cfg), "--out", str(tmp_path / "o.csv")]) == 2


def test_simulate_rejects_bad_rotation(tmp_path):
    cfg = json.loads(json.dumps(FREE_TOP_FULL))
    del cfg["initial"]["axis_angle"]
    cfg["initial"]["R"] = [1.01, 0, 0, 0, 1, 0, 0, 0, 1]  # defect ~2e-2 > 1e-6
    assert main(["simulate", "--config", write_config(tmp_path, cfg), "--out", str(tmp_path / "o.csv")]) == 2


def test_simulate_rejects_off_sphere_nu(tmp_path):
    cfg = json.loads(json.dumps(FREE_TOP_REDUCED))
    cfg["initial"]["nu"] = [1.0, 0.5, 0.0]
    assert main(["simulate", "--config", write_config(tmp_path, cfg), "--out", str(tmp_path / "o.csv")]) == 2


def test_simulate_accepts_nearly_unit_nu(tmp_path):
    cfg = json.loads(json.dumps(FREE_TOP_REDUCED))
    cfg["initial"]["nu"] = [1.0 + 5e-7, 0.0, 0.0]  # renormalized on load
    assert main(["simulate", "--config", write_config(tmp_path, cfg), "--out", str(tmp_path / "o.csv")]) == 0


def test_simulate_rejects_bad_potential(tmp_path):
    cfg = dict(FREE_TOP_REDUCED, potential={"type": "magnetic"})
    assert main(["simulate", "--config", write_config(tmp_path, cfg), "--out", str(tmp_path / "o.csv")]) == 2


def test_simulate_nonfinite_exit_code(tmp_path):
    # dipole singularity: aim straight at the origin with a large momentum
    cfg = json.loads(json.dumps(FREE_TOP_REDUCED))
    cfg["potential"] = {"type": "dipole", "m": 0.05, "mu": [0.0, 0.0, 1.0]}
    cfg["initial"]["x"] = [1.0, 0.0, 0.0]
    cfg["initial"]["p"] = [-1e155, 0.0, 0.0]
    cfg["T"] = 1.0
    cfg["dt"] = 0.5
    with np.errstate(all="ignore"):
        code = main(["simulate", "--config", write_config(tmp_path, cfg), "--out", str(tmp_path / "o.csv")])
    assert code == 3


def test_check_suite_passes(capsys):
    assert main(["check", "--suite", "brackets", "--seed", "1"]) == 0
    out = capsys.readouterr().out
    assert "PASS" in out and "FAIL" not in out


def test_check_deterministic(capsys):
    main(["check", "--suite", "casimirs", "--seed", "7"])
    first = capsys.readouterr().out
    main(["check", "--suite", "casimirs", "--seed", "7"])
    second = capsys.readouterr().out
    assert first == second


def test_compare_free_top(tmp_path, capsys):
    cfg = write_config(tmp_path, FREE_TOP_FULL)
    assert main(["compare", "--config", cfg]) == 0
    assert "PASS" in capsys.readouterr().out


def test_compare_gravity(tmp_path, capsys):
    cfg = json.loads(json.dumps(FREE_TOP_FULL))
    cfg["potential"] = {"type": "gravity", "g": [0.0, 0.0, -1.0], "chi": 0.3}
    assert main(["compare", "--config", write_config(tmp_path, cfg)]) == 0
    assert "PASS" in capsys.readouterr().out


def test_compare_requires_full_space(tmp_path):
    assert main(["compare", "--config", write_config(tmp_path, FREE_TOP_REDUCED)]) == 2


def test_compare_rejects_second_dt(tmp_path):
    cfg = dict(FREE_TOP_FULL, dt_reduced=1e-2)  # unknown key: mismatched dt impossible
    assert main(["compare", "--config", write_config(tmp_path, cfg)]) == 2


def test_orbit_report(capsys):
    assert main(["orbit", "--nu", "0,0,1", "--pi", "0,0,2", "--count", "10", "--seed", "3"]) == 0
    out = capsys.readouterr().out
    assert "C1 = 1" in out and "C2 = 2" in out
    assert "PASS" in out


def test_orbit_orthogonal_momentum_zero_magnetic(capsys):
    assert main(["orbit", "--nu", "0,0,1", "--pi", "5,0,0", "--count", "5"]) == 0
    out = capsys.readouterr().out
    assert "C2 = 0" in out
    for line in out.splitlines():
        if line.strip().startswith("B(u, v)"):
            assert float(line.split("=")[1]) == 0.0


def test_orbit_rejects_zero_nu():
    assert main(["orbit", "--nu", "0,0,0", "--pi", "1,0,0"]) == 2


def test_orbit_rejects_malformed_vector():
    assert main(["orbit", "--nu", "1,2", "--pi", "0,0,1"]) == 2


def test_console_entry_point(tmp_path):
    cfg = write_config(tmp_path, FREE_TOP_REDUCED)
    out = str(tmp_path / "traj.csv")
    proc = subprocess.run(
        [sys.executable, "-m", "symtop.cli", "simulate", "--config", cfg, "--out", out],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0, proc.stderr
    assert "drift" in proc.stdout
