import json

import pytest
from scipy.constants import c

from rifscatter.cli import ENV_OUTPUT, main, parse_length, parse_velocity_spec, read_config_file
from rifscatter.errors import ConfigError


def run(capsys, *argv):
    rc = main(list(argv))
    out = capsys.readouterr()
    return rc, [line for line in out.out.splitlines() if line], out.err


def load_csv_meta(path):
    meta = {}
    with open(path) as fh:
        for line in fh:
            if not line.startswith("# "):
                break
            meta.update(json.loads(line[2:]))
    return meta


def test_scenario_json(tmp_path, capsys):
    rc, paths, _ = run(capsys, "scenario", "--output-dir", str(tmp_path))
    assert rc == 0
    doc = json.loads(open(paths[0]).read())
    row = doc["data"][0]
    assert 0.5 < row["whi_width_ueV"] < 1.5
    assert 5 < row["bhi_width_ueV"] < 15
    assert doc["metadata"]["config_hash"]
    assert "legend" in doc["metadata"] and "units" in doc["metadata"]


def test_smatrix_and_dispersion(tmp_path, capsys):
    rc, paths, _ = run(capsys, "smatrix", "--omega", "7.6e13", "--output-dir", str(tmp_path))
    assert rc == 0
    data = json.loads(open(paths[0]).read())["data"][0]
    assert data["scenario"] == "c"
    assert data["quasi_unitarity_residual"] < 1e-8
    rc, paths, _ = run(capsys, "dispersion", "--n-omega", "5", "--output-dir", str(tmp_path))
    assert rc == 0
    text = open(paths[0]).read().splitlines()
    header = [l for l in text if not l.startswith("#")][0]
    assert header.startswith("omega,side,k_re")
    assert load_csv_meta(paths[0])["units"]["omega"].startswith("rad/s")


def test_spectrum_csv(tmp_path, capsys):
    rc, paths, _ = run(capsys, "spectrum", "--delta-n", "2e-6", "--n-omega", "20", "--n-interval", "10",
                       "--output-dir", str(tmp_path))
    assert rc == 0 and len(paths) == 1
    rows = [l for l in open(paths[0]) if not l.startswith("#")]
    assert rows[0].startswith("omega,scenario,phi_uL")
    assert len(rows) > 20


def test_output_is_deterministic(tmp_path, capsys):
    args = ["labspectrum", "--delta-n", "1e-4", "--n-lambda", "15"]
    _, p1, _ = run(capsys, *args, "--output-dir", str(tmp_path / "a"))
    _, p2, _ = run(capsys, *args, "--output-dir", str(tmp_path / "b"), "--workers", "2")
    assert open(p1[0], "rb").read() == open(p2[0], "rb").read()


def test_env_var_sets_output_dir(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv(ENV_OUTPUT, str(tmp_path / "env"))
    rc, paths, _ = run(capsys, "scenario")
    assert rc == 0
    assert paths[0].startswith(str(tmp_path / "env"))


def test_config_file_and_override(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# step\ndelta-n = 1e-4\nu = 0.66c\n")
    rc, paths, _ = run(capsys, "scenario", "--config", str(cfg), "--output-dir", str(tmp_path))
    row = json.loads(open(paths[0]).read())["data"][0]
    assert rc == 0 and row["delta_n"] == 1e-4 and row["u_over_c"] == pytest.approx(0.66)
    rc, paths, _ = run(capsys, "scenario", "--config", str(cfg), "--delta-n", "2e-6", "--output-dir", str(tmp_path))
    assert json.loads(open(paths[0]).read())["data"][0]["delta_n"] == 2e-6


def test_config_errors_exit_2(tmp_path, capsys):
    rc, _, err = run(capsys, "spectrum", "--delta-n", ",", "--output-dir", str(tmp_path))
    assert rc == 2 and "empty" in err
    bad = tmp_path / "bad.cfg"
    bad.write_text("colour = blue\n")
    rc, _, err = run(capsys, "scenario", "--config", str(bad))
    assert rc == 2 and "unknown key" in err
    rc, _, _ = run(capsys, "scenario", "--u", "1.5c", "--output-dir", str(tmp_path))
    assert rc == 2
    rc, _, _ = run(capsys, "smatrix", "--output-dir", str(tmp_path))
    assert rc == 2


def test_compute_error_exit_1(tmp_path, capsys):
    # Exactly at a subluminal-interval edge the scattering solve refuses to run.
    rc, paths, _ = run(capsys, "scenario", "--output-dir", str(tmp_path))
    edge = json.loads(open(paths[0]).read())["data"][0]["whi"][0]
    rc, _, err = run(capsys, "smatrix", "--omega", repr(edge), "--output-dir", str(tmp_path))
    assert rc == 1 and "BoundaryFrequency" in err


def test_config_hash_tracks_numbers(tmp_path, capsys):
    _, p1, _ = run(capsys, "scenario", "--output-dir", str(tmp_path / "a"))
    _, p2, _ = run(capsys, "scenario", "--output-dir", str(tmp_path / "b"), "--workers", "3")
    _, p3, _ = run(capsys, "scenario", "--output-dir", str(tmp_path / "c"), "--delta-n", "1e-5")
    h = [json.loads(open(p[0]).read())["metadata"]["config_hash"] for p in (p1, p2, p3)]
    assert h[0] == h[1] != h[2]


def test_parsers(tmp_path):
    assert parse_length("800nm") == pytest.approx(800e-9)
    assert parse_length("1.2um") == pytest.approx(1.2e-6)
    u, lam = parse_velocity_spec("2/3c")
    assert u == pytest.approx(2 * c / 3) and lam is None
    u, lam = parse_velocity_spec("800nm")
    assert lam == pytest.approx(800e-9) and 0.6 * c < u < 0.7 * c
    with pytest.raises(ConfigError):
        parse_length("wide")
    p = tmp_path / "x.cfg"
    p.write_text("seed = 3  # trailing comment\n\n")
    assert read_config_file(p) == {"seed": "3"}
