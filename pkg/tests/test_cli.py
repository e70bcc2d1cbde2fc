import io
import json
import subprocess
import sys

import numpy as np
import pytest

from fentropy.cli import run
from fentropy.states import matrix_to_json, random_density


def call(argv, capsys, stdin=None, monkeypatch=None):
    if stdin is not None:
        monkeypatch.setattr(sys, "stdin", io.StringIO(stdin))
    code = run(argv)
    out, err = capsys.readouterr()
    return code, out, err


def test_bound(capsys):
    code, out, _ = call(["bound", "--f", "shannon", "--d", "2", "--eps", "0.5"], capsys)
    assert code == 0 and out == "1.0\n"
    code, out, _ = call(["bound", "--f", "tsallis", "--alpha", "2", "--d", "3", "--eps", "0.5", "--format", "json"], capsys)
    obj = json.loads(out)
    assert obj["value"] == 0.625 and obj["regime"] == "rising" and obj["f"] == "tsallis(2)"


def test_bound_with_trace_t(capsys):
    code, out, _ = call(["bound", "--f", "gini_simpson", "--d", "2", "--t", "2", "--eps", "1"], capsys)
    assert code == 0 and float(out) == 2.0


def test_usage_errors(capsys):
    code, _, err = call(["oracle", "--f", "shannon", "--d", "4", "--eps", "0.3"], capsys)
    assert code == 2 and "oracle supports d in {2,3}" in err
    assert call(["bound", "--bogus"], capsys)[0] == 2
    code, _, err = call(["bound", "--d", "2"], capsys)
    assert code == 2 and "--eps" in err
    code, _, err = call(["bound", "--f", "tsallis", "--d", "2", "--eps", "0.1"], capsys)
    assert code == 2 and "alpha" in err


def test_extremal_distance_round_trip(capsys, monkeypatch):
    code, out, _ = call(["extremal", "--d", "3", "--eps", "0.6", "--format", "json"], capsys)
    assert code == 0
    obj = json.loads(out)
    assert obj["q"] == pytest.approx([0.4, 0.3, 0.3])
    code, out2, _ = call(["distance"], capsys, stdin=out, monkeypatch=monkeypatch)
    assert code == 0 and abs(float(out2) - 0.6) <= 1e-12


def test_extremal_csv(capsys):
    code, out, _ = call(["extremal", "--d", "2", "--eps", "0.5", "--format", "csv"], capsys)
    assert out.splitlines() == ["index,p,q", "0,1.0,0.5", "1,0.0,0.5"]


def test_distance_and_entropy_from_files(tmp_path, capsys):
    r, s = random_density(3, 1), random_density(3, 2)
    (tmp_path / "r.json").write_text(json.dumps(matrix_to_json(r)))
    (tmp_path / "s.json").write_text(json.dumps([0.2, 0.3, 0.5]))
    code, out, _ = call(["distance", "--rho", str(tmp_path / "r.json"), "--sigma", str(tmp_path / "s.json"),
                         "--format", "json"], capsys)
    obj = json.loads(out)
    assert code == 0 and abs(obj["trace_distance"] - obj["projector_value"]) < 1e-9
    code, out, _ = call(["entropy", "--rho", str(tmp_path / "s.json"), "--f", "tsallis", "--alpha", "2",
                         "--format", "json"], capsys)
    obj = json.loads(out)
    assert obj["entropy"] == pytest.approx(1 - (0.04 + 0.09 + 0.25))
    assert obj["renyi"] == pytest.approx(-np.log2(0.38))


def test_malformed_inputs(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    code, _, err = call(["entropy", "--rho", str(bad)], capsys)
    assert code == 2 and "bad.json" in err
    bad.write_text(json.dumps({"dim": 2, "re": [[0.6, 0], [0, 0.6]], "im": [[0, 0], [0, 0]]}))
    code, _, err = call(["entropy", "--rho", str(bad)], capsys)
    assert code == 2 and "trace" in err
    table = tmp_path / "f.csv"
    table.write_text("u,v\n0,0\n1,1\n")
    code, _, err = call(["bound", "--f-table", str(table), "--d", "2", "--eps", "0.2"], capsys)
    assert code == 2 and "--f-table" in err
    code, _, err = call(["bound", "--f-table", str(tmp_path / "missing.csv"), "--d", "2", "--eps", "0.2"], capsys)
    assert code == 2 and "missing.csv" in err


def test_f_table(tmp_path, capsys):
    table = tmp_path / "f.csv"
    table.write_text("x,fx\n0,0\n0.5,-0.25\n1,0\n")
    code, out, _ = call(["bound", "--f-table", str(table), "--d", "2", "--eps", "0.5"], capsys)
    assert code == 0 and float(out) == pytest.approx(0.5)


def test_verify_json_and_reproducible(capsys, tmp_path):
    argv = ["verify", "--f", "tsallis", "--alpha", "2", "--d", "4", "--n", "10000", "--seed", "42"]
    code, a, err = call(argv, capsys)
    assert code == 0 and "ok" in err
    obj = json.loads(a)
    assert obj["violations"] == [] and obj["seed"] == 42
    assert set(obj) == {"f_name", "d", "samples", "seed", "max_entropy_gap", "bound_at_gap", "min_slack", "violations"}
    code, _, _ = call(argv + ["--out", str(tmp_path / "r.json")], capsys)
    assert (tmp_path / "r.json").read_text() == a


def test_oracle_command(capsys):
    code, out, _ = call(["oracle", "--f", "tsallis", "--alpha", "2", "--d", "3", "--eps", "0.5", "--grid", "100"], capsys)
    obj = json.loads(out)
    assert code == 0 and obj["max_Df"] == pytest.approx(0.625, abs=1e-6)
    assert obj["argmax"]["p"] == pytest.approx([1, 0, 0])


def test_sweep_command(capsys):
    code, out, _ = call(["sweep", "--f", "shannon", "--d", "2", "--grid", "5"], capsys)
    lines = out.splitlines()
    assert code == 0 and lines[0] == "eps,delta,regime"
    assert lines[3] == "0.5,1.0,peak"
    code, out, _ = call(["sweep", "--f", "shannon", "--d", "3", "--grid", "3", "--n", "20", "--with-oracle"], capsys)
    assert out.splitlines()[0] == "eps,delta,regime,min_slack,oracle_gap"
    code, _, err = call(["sweep", "--f", "shannon", "--d", "4", "--grid", "3", "--with-oracle"], capsys)
    assert code == 2


def test_config_file_flags_win(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"f": "tsallis", "alpha": 2, "d": 2, "eps": 0.1}))
    code, out, _ = call(["bound", "--config", str(cfg)], capsys)
    assert float(out) == pytest.approx(0.1 * 1.9 - 0.01)
    code, out, _ = call(["bound", "--config", str(cfg), "--eps", "0.5"], capsys)
    assert float(out) == pytest.approx(0.5)
    cfg.write_text(json.dumps({"colour": 1}))
    assert call(["bound", "--config", str(cfg)], capsys)[0] == 2


def test_module_entry_point_byte_identical():
    argv = [sys.executable, "-m", "fentropy", "verify", "--f", "shannon", "--d", "3", "--n", "500", "--seed", "7"]
    a = subprocess.run(argv, capture_output=True, check=True).stdout
    b = subprocess.run(argv, capture_output=True, check=True).stdout
    assert a == b and b"min_slack" in a
