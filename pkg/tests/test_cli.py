import csv
import io
import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from bqkz import cli
from bqkz.errors import ConfigError
from bqkz.weightspace import enumerate_I

finite = st.floats(-5, 5, allow_nan=False, allow_infinity=False)
pairs = st.tuples(finite, finite).map(list)


def small_config(tmp_path, **over):
    cfg = json.loads(json.dumps(cli.DEFAULT_CONFIG))
    cfg["quadrature"]["n_per_dim"] = 32
    cfg["grid"]["points"] = cfg["grid"]["points"][:1]
    cfg["draws"] = 2
    cfg.update(over)
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps(cfg))
    return str(path)


@settings(max_examples=50, deadline=None)
@given(st.floats(-2, -0.1), finite, pairs, pairs, st.lists(pairs, min_size=1, max_size=3),
       st.integers(0, 3), st.integers(0, 10 ** 6))
def test_config_canonical_form_is_a_fixed_point(tre, tim, xp, xm, ell, M, seed):
    raw = {"params": {"tau": [tre, tim], "eta": [0.7, 0.1], "xi_plus": xp, "xi_minus": xm,
                      "ell": ell, "M": M}, "seed": seed}
    first = cli.RunConfig.from_dict(raw).canonical()
    assert cli.parse_config(first).canonical() == first


@pytest.mark.parametrize("text", [
    "not json",
    "[1, 2]",
    '{"params": 3}',
    '{"params": {"tau": [0.5, 0], "eta": 1, "xi_plus": 0, "xi_minus": 0, "ell": [1], "M": 1}}',
    '{"params": {"tau": -1, "eta": [1, 2, 3], "xi_plus": 0, "xi_minus": 0, "ell": [1], "M": 1}}',
    '{"surprise": 1}',
])
def test_malformed_configs(text):
    with pytest.raises(ConfigError):
        cli.parse_config(text)


def test_malformed_config_exit_status(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"params": 3}')
    assert cli.main(["verify", "--config", str(bad), "--suite", "algebra"]) == 2
    assert "ConfigError" in capsys.readouterr().err
    assert cli.main(["verify", "--config", str(tmp_path / "missing.json")]) == 2


def test_verify_report_rows(tmp_path):
    out = tmp_path / "report.json"
    status = cli.main(["verify", "--config", small_config(tmp_path), "--suite", "algebra",
                       "--out", str(out)])
    report = json.loads(out.read_text())
    assert status == 0 and report["passed"]
    assert {"check", "anchor", "params", "residual", "tolerance", "pass"} <= set(report["rows"][0])
    names = {r["check"] for r in report["rows"]}
    assert {"yang-baxter", "reflection", "unitarity", "p-symmetry", "rll", "crossing", "rtrt"} <= names


def test_failing_check_gives_exit_one(tmp_path, monkeypatch):
    def bad_suite(cfg, suite, record=None):
        return [{"check": "x", "anchor": "y", "params": {}, "residual": 1.0, "tolerance": 0.5,
                 "pass": False}]
    monkeypatch.setattr(cli, "run_suite", bad_suite)
    assert cli.main(["verify", "--suite", "algebra", "--out", str(tmp_path / "r.json")]) == 1


def test_solve_with_no_rapidities(tmp_path):
    out = tmp_path / "rec.json"
    assert cli.main(["solve", "--config", small_config(tmp_path), "--k", "", "--out", str(out)]) == 0
    rec = json.loads(out.read_text())
    assert rec["psi"] == [{"key": [], "value": [1.0, 0.0]}]


def test_solve_is_deterministic_and_round_trips(tmp_path):
    cfg = small_config(tmp_path)
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for path in (a, b):
        assert cli.main(["solve", "--config", cfg, "--k", "1,2", "--out", str(path)]) == 0
    assert a.read_bytes() == b.read_bytes()
    report = tmp_path / "v.json"
    assert cli.main(["verify", "--config", cfg, "--suite", "qkz", "--record", str(a),
                     "--out", str(report)]) == 0
    rows = json.loads(report.read_text())["rows"]
    assert rows[0]["check"] == "record reproduces" and rows[0]["residual"] < 1e-14


def test_solve_rejects_bad_keys(tmp_path):
    assert cli.main(["solve", "--config", small_config(tmp_path), "--k", "2,1"]) == 2


def test_sweep_single_point_matches_solve(tmp_path):
    cfg = small_config(tmp_path)
    table, rec = tmp_path / "s.csv", tmp_path / "r.json"
    assert cli.main(["sweep", "--config", cfg, "--out", str(table)]) == 0
    rows = list(csv.reader(io.StringIO(table.read_text())))
    keys = enumerate_I(2, 2)
    assert len(rows) == 2
    assert len(rows[0]) == 2 * len(keys) + 4
    cli.main(["solve", "--config", cfg, "--k", "1,2", "--out", str(rec)])
    theta = json.loads(rec.read_text())["theta"]
    col = rows[0].index("theta_12_re")
    assert float(rows[1][col]) == theta[1]["value"][0]
    assert float(rows[1][col + 1]) == theta[1]["value"][1]


def test_sweep_along_a_ray_decays(tmp_path):
    ray = {"start": [[9.0, 0.2], [4.5, -0.1]], "direction": [2, 1], "depths": [0, 2, 4, 6]}
    cfg = small_config(tmp_path, grid={"points": [], "ray": ray})
    table = tmp_path / "s.csv"
    assert cli.main(["sweep", "--config", cfg, "--out", str(table)]) == 0
    rows = list(csv.DictReader(io.StringIO(table.read_text())))
    dist = [float(r["distance"]) for r in rows]
    assert np.all(np.diff(dist) < 0)
    assert float(rows[-1]["slope"]) < 0


def test_dump_operator_format(tmp_path):
    out = tmp_path / "R.txt"
    assert cli.main(["dump-operator", "--kind", "R", "--x", "[0.3, 0.1]", "--out", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "3 3"
    vals = np.array(lines[1].split(), dtype=float)
    assert vals.size == 6
    A = cli.operator_matrix(cli.load_config(None), "R", 0.3 + 0.1j)
    assert vals[0] == A[0, 0].real and vals[1] == A[0, 0].imag
    assert cli.main(["dump-operator", "--kind", "R"]) == 2


def test_dump_contour(tmp_path):
    out = tmp_path / "c.json"
    assert cli.main(["dump-contour", "--k", "1,2", "--out", str(out)]) == 0
    rec = json.loads(out.read_text())
    assert rec["base_point_violations"] == []
    assert len(rec["segments"]) == 2 and rec["pole_separation"] > 0


def test_module_entry_point():
    import subprocess
    import sys
    proc = subprocess.run([sys.executable, "-m", "bqkz", "dump-contour", "--k", "1"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and '"gamma"' in proc.stdout
