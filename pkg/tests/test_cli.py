import json

import pytest

from artifact import cli
from artifact.report import SCHEMA, blob_hash, deterministic_view, dumps


def _run(tmp_path, *args):
    code = cli.main(list(args) + ["--out", str(tmp_path)])
    p = tmp_path / f"{args[0]}.json"
    return code, (json.loads(p.read_text()) if p.exists() else None)


def test_lorenz_exit_zero(tmp_path):
    code, r = _run(tmp_path, "lorenz")
    assert code == 0
    assert r["schema"] == SCHEMA and r["command"] == "lorenz"
    assert r["results"]["abs_defect"] == pytest.approx(1.23572, abs=1e-4)
    assert (tmp_path / "lorenz_table.csv").exists()
    assert "timestamp" in r["metadata"] and "runtime_s" in r["metadata"]


def test_affine_qnl_is_certification_failure(tmp_path):
    code, r = _run(tmp_path, "qnl", "--model", "affine")
    assert code == 2
    assert r["pass"] is False


def test_invalid_parameter_exit_one(tmp_path):
    assert cli.main(["lyons", "--t", "1.5", "--task", "fixed-points", "--out", str(tmp_path)]) == 1
    assert cli.main(["lorenz", "--samples", "0", "--out", str(tmp_path)]) == 1
    assert cli.main(["nonsense"]) == 1


def test_budget_exit_three(tmp_path):
    assert cli.main(["lyons", "--task", "uni", "--budget", "3", "--out", str(tmp_path)]) == 3


def test_fixed_points_alias(tmp_path):
    code, r = _run(tmp_path, "lyons", "--subcommand", "fixed-points")
    assert code == 0
    assert r["results"]["fixed_points"]["x0"] == pytest.approx(0.5, abs=1e-15)


def test_config_overrides_flags(tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"a": 1.15, "seed": 7}))
    code, r = _run(tmp_path, "lorenz", "--a", "1.1", "--config", str(cfg))
    assert code == 0
    assert r["params"]["a"] == 1.15 and r["provenance"]["seed"] == 7


def test_bad_config_file(tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text("[1, 2")
    assert cli.main(["lorenz", "--config", str(cfg), "--out", str(tmp_path)]) == 1


def test_output_dir_env(tmp_path, monkeypatch):
    monkeypatch.setenv(cli.OUT_ENV, str(tmp_path / "envout"))
    assert cli.main(["lorenz"]) == 0
    assert (tmp_path / "envout" / "lorenz.json").exists()


def test_model_file_provenance(tmp_path):
    spec = tmp_path / "m.json"
    data = json.dumps({"builtin": "lyons-sub", "t": 0.5}).encode()
    spec.write_bytes(data)
    code, r = _run(tmp_path, "qnl", "--model", str(spec), "--ns", "3,4,5", "--sigmas", "0.5,0.2,0.1")
    assert r["provenance"]["content_hash"] == blob_hash(data)
    assert code in (0, 2)


def test_serialized_model_file(tmp_path):
    from artifact.models.lyons import sub_model
    p = tmp_path / "model.json"
    p.write_text(json.dumps(sub_model(0.5).to_dict()))
    code, r = _run(tmp_path, "census", "--model", str(p), "--ns", "2,3")
    assert code in (0, 2) and len(r["results"]["rows"]) == 2


def test_svg_written(tmp_path):
    code, _ = _run(tmp_path, "fourier", "--model", "uniform", "--svg")
    assert code == 0
    assert list(tmp_path.glob("fourier_*.svg"))


@pytest.mark.parametrize("args", [
    ["lorenz"],
    ["lyons", "--task", "decay", "--samples", "50000", "--xi-max", "8192"],
    ["staircase", "--M", "512", "--mnl-samples", "20000"],
])
def test_determinism(tmp_path, args):
    a = tmp_path / "a"
    b = tmp_path / "b"
    assert cli.main(args + ["--out", str(a), "--seed", "3", "--workers", "1"]) == 0
    assert cli.main(args + ["--out", str(b), "--seed", "3", "--workers", "4"]) == 0
    ra = json.loads((a / f"{args[0]}.json").read_text())
    rb = json.loads((b / f"{args[0]}.json").read_text())
    ra["provenance"].pop("workers")
    rb["provenance"].pop("workers")
    assert dumps(deterministic_view(ra)) == dumps(deterministic_view(rb))
