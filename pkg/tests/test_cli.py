"""CLI: grammar, envelope schema, exit codes, determinism, formats."""

import json
import math
import re

import pytest

from spherepack.cli import RunConfig, run
from spherepack.errors import ConfigError


def invoke(capsys, *argv):
    code = run(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def strip_timing(text: str) -> str:
    return re.sub(r'"wall_time_ms": \d+', '"wall_time_ms": X', text)


def test_packing_density_report(capsys):
    code, out, _ = invoke(capsys, "packing", "density")
    assert code == 0
    data = json.loads(out)
    assert data["command"] == "packing density"
    assert data["pass"] is True
    assert abs(data["results"]["value"] - math.pi ** 4 / 384.0) < 1e-12
    assert set(data) == {"command", "config", "results", "pass", "wall_time_ms"}


def test_envelope_echoes_config(capsys):
    code, out, _ = invoke(capsys, "packing", "density", "--seed", "7")
    data = json.loads(out)
    assert data["config"]["seed"] == 7
    assert data["config"]["quadrature"]["gauss_order"] == 32


def test_float_formatting_17_digits(capsys):
    _, out, _ = invoke(capsys, "packing", "density")
    m = re.search(r'"target": ([0-9.]+)', out)
    assert m and len(m.group(1).replace(".", "")) >= 16


def test_forms_identities(capsys):
    code, out, _ = invoke(capsys, "forms", "identities", "--order", "20")
    assert code == 0
    data = json.loads(out)
    res = data["results"]
    assert res["ramanujan_zero"] and res["jacobi_zero"] and res["delta_matches_eta_product"]


def test_forms_eval(capsys):
    code, out, _ = invoke(capsys, "forms", "eval", "--form", "E4", "--im", "1")
    assert code == 0
    data = json.loads(out)
    assert abs(data["results"]["value"]["re"] - 1.4557628) < 2e-7


def test_forms_eval_unknown_form(capsys):
    code, _, err = invoke(capsys, "forms", "eval", "--form", "E8")
    assert code == 2
    assert "unknown form" in err


def test_lattice_shells_json_and_csv(capsys):
    code, out, _ = invoke(capsys, "lattice", "shells", "--max-norm2", "8")
    assert code == 0
    data = json.loads(out)
    shells = {s["norm2"]: s["count"] for s in data["results"]["shells"]}
    assert shells == {2: 240, 4: 2160, 6: 6720, 8: 17520}
    code, out, _ = invoke(capsys, "lattice", "shells", "--max-norm2", "8",
                          "--format", "csv")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "norm2,count"
    assert lines[1] == "2,240" and lines[-1] == "8,17520"


def test_csv_rejected_for_non_tabular(capsys):
    code, _, err = invoke(capsys, "packing", "density", "--format", "csv")
    assert code == 2
    assert "csv" in err


def test_lattice_decode(capsys):
    code, out, _ = invoke(capsys, "lattice", "decode", "--point",
                          "0.9,0.9,0,0,0,0,0,0")
    assert code == 0
    data = json.loads(out)
    assert data["results"]["nearest"][:2] == [1.0, 1.0]
    assert abs(data["results"]["distance"] - math.sqrt(0.02)) < 1e-12


def test_lattice_decode_bad_point(capsys):
    code, _, err = invoke(capsys, "lattice", "decode", "--point", "1,2,3")
    assert code == 2


def test_lattice_info(capsys):
    code, out, _ = invoke(capsys, "lattice", "info")
    assert code == 0
    data = json.loads(out)
    assert data["results"]["theta_matches_eisenstein"] is True
    assert data["results"]["covolume"] == 1.0


def test_packing_mc_small(capsys):
    code, out, _ = invoke(capsys, "packing", "mc", "--radius", "3", "--samples",
                          "20000", "--seed", "42")
    assert code == 0
    data = json.loads(out)
    assert 0.0 <= data["results"]["value"] <= 1.0
    assert data["results"]["seed"] == 42


def test_magic_eval(capsys):
    code, out, _ = invoke(capsys, "magic", "eval", "--r", "0")
    assert code == 0
    data = json.loads(out)
    assert abs(data["results"]["g"] - 1.0) < 1e-9
    assert abs(data["results"]["a"]["im"] + 8640.0 / math.pi) < 1e-6


def test_magic_table_csv(capsys):
    code, out, _ = invoke(capsys, "magic", "table", "--which", "G", "--grid",
                          "0:2:5", "--format", "csv")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "r,value"
    assert len(lines) == 6


def test_magic_verify(capsys):
    code, out, _ = invoke(capsys, "magic", "verify")
    assert code == 0
    data = json.loads(out)
    assert data["results"]["max_rel_error"] < 1e-6
    assert data["pass"] is True


def test_bound_command(capsys):
    code, out, _ = invoke(capsys, "bound")
    assert code == 0
    data = json.loads(out)
    res = data["results"]
    assert abs(res["bound"] - res["target"]) < 1e-6
    assert res["target"] == pytest.approx(math.pi ** 4 / 384.0, rel=1e-15)
    assert data["pass"] is True


def test_axis_check_both(capsys):
    code, out, _ = invoke(capsys, "axis", "check", "--grid", "0.1:10:50")
    assert code == 0
    data = json.loads(out)
    conv = data["results"]["conventions"]
    assert conv["sweighted"]["pass"] is True
    assert conv["direct"]["pass"] is False
    assert data["results"]["certified_by"] == "sweighted"


def test_axis_check_direct_fails(capsys):
    code, out, _ = invoke(capsys, "axis", "check", "--convention", "direct",
                          "--grid", "0.1:10:50")
    assert code == 1
    data = json.loads(out)
    assert data["pass"] is False


def test_determinism_byte_identical(capsys):
    _, out1, _ = invoke(capsys, "lattice", "shells", "--max-norm2", "10")
    _, out2, _ = invoke(capsys, "lattice", "shells", "--max-norm2", "10")
    assert strip_timing(out1) == strip_timing(out2)
    _, out3, _ = invoke(capsys, "bound")
    _, out4, _ = invoke(capsys, "bound")
    assert strip_timing(out3) == strip_timing(out4)


def test_out_file(tmp_path, capsys):
    path = tmp_path / "report.json"
    code, out, _ = invoke(capsys, "packing", "density", "--out", str(path))
    assert code == 0
    assert out == ""
    data = json.loads(path.read_text())
    assert data["command"] == "packing density"


def test_config_file_roundtrip(tmp_path, capsys):
    cfg = tmp_path / "config.json"
    cfg.write_text(json.dumps({"seed": 11, "quadrature": {"gauss_order": 24}}))
    code, out, _ = invoke(capsys, "packing", "density", "--config", str(cfg))
    assert code == 0
    data = json.loads(out)
    assert data["config"]["seed"] == 11
    assert data["config"]["quadrature"]["gauss_order"] == 24


def test_config_unknown_key_rejected(tmp_path, capsys):
    cfg = tmp_path / "config.json"
    cfg.write_text(json.dumps({"seeed": 11}))
    code, _, err = invoke(capsys, "packing", "density", "--config", str(cfg))
    assert code == 2
    assert "unknown config keys" in err


def test_usage_error_returns_2(capsys):
    assert run(["lattice", "bogus"]) == 2
    assert run([]) == 2


def test_env_threads(monkeypatch, capsys):
    monkeypatch.setenv("SPHEREPACK_THREADS", "2")
    code, out, _ = invoke(capsys, "packing", "mc", "--radius", "2",
                          "--samples", "5000", "--seed", "1")
    assert code == 0
    assert json.loads(out)["results"]["threads"] == 2


def test_env_threads_invalid(monkeypatch, capsys):
    monkeypatch.setenv("SPHEREPACK_THREADS", "many")
    code, _, err = invoke(capsys, "packing", "mc", "--radius", "2",
                          "--samples", "5000")
    assert code == 2


def test_runconfig_validation():
    with pytest.raises(ConfigError):
        RunConfig(series_order=1)
    with pytest.raises(ConfigError):
        RunConfig(output_format="xml")
    with pytest.raises(ConfigError):
        RunConfig.from_dict({"quadrature": {"nodes": 3}})
