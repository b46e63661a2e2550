import json

import numpy as np
import pytest

from diractomo.cli import main


def run(args):
    return main(args)


def test_fierz_check_passes(tmp_path):
    out = tmp_path / "fierz.json"
    assert run(["fierz-check", "--trials", "50", "--seed", "42",
                "--out", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert doc["summary"]["pass"] is True
    assert doc["version"]
    assert len(doc["config_sha256"]) == 64


def test_explicit_spinor_config(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({
        "trials": 1,
        "spinor": [1, 0, 0, 0, 0, 0, 0, 0],
    }))
    out = tmp_path / "r.json"
    assert run(["fierz-check", "--config", str(cfg), "--out", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert doc["summary"]["max_residual"] < 1e-12


def test_config_errors(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run(["fierz-check", "--config", str(bad)]) == 2
    bad.write_text(json.dumps({"trials": 0}))
    assert run(["fierz-check", "--config", str(bad)]) == 2
    bad.write_text(json.dumps({"shots": -5}))
    assert run(["roundtrip", "--config", str(bad)]) == 2
    bad.write_text(json.dumps({"frobnicate": 1}))
    assert run(["fierz-check", "--config", str(bad)]) == 2
    capsys.readouterr()


def test_roundtrip_exact(tmp_path):
    out = tmp_path / "rt.json"
    assert run(["roundtrip", "--trials", "10", "--seed", "1",
                "--protocol", "discrete-majorana", "--out", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert doc["summary"]["max_phase_distance"] < 1e-9
    assert doc["summary"]["failures"] == 0


def test_roundtrip_shots_reported(tmp_path):
    out = tmp_path / "rt.json"
    assert run(["roundtrip", "--trials", "5", "--seed", "1", "--shots",
                "100000", "--out", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert 1e-5 < doc["summary"]["median_phase_distance"] < 0.3


def test_feasibility_table(tmp_path):
    out = tmp_path / "feas.csv"
    assert run(["feasibility", "--format", "csv", "--out", str(out)]) == 0
    rows = [line.split(",") for line in out.read_text().splitlines()
            if not line.startswith("#")][1:]
    table = {(r[0], r[1], r[2]): int(r[3]) for r in rows}
    assert table[("majorana", "rotations", "generic")] == 7
    assert table[("standard", "rotations", "generic")] < 7
    assert table[("standard", "full-restricted-lorentz", "generic")] == 7
    assert table[("chiral", "full-restricted-lorentz", "generic")] <= 6
    assert table[("chiral", "full-restricted-lorentz", "weyl")] == 3


def test_ambiguity_counterexamples(tmp_path):
    out = tmp_path / "amb.json"
    assert run(["ambiguity", "--trials", "2", "--rep", "standard",
                "--out", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert doc["summary"]["counterexamples"] == 2
    for row in doc["rows"]:
        assert row[3] == 1 and row[5] < 1e-9 and row[6] > 0.1


def test_kernel_check(tmp_path):
    out = tmp_path / "k.json"
    assert run(["kernel-check", "--trials", "20", "--out", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert doc["summary"]["max_error"] < 1e-10


@pytest.mark.parametrize("fmt", ["csv", "json"])
def test_byte_identical_outputs(tmp_path, fmt):
    a, b = tmp_path / f"a.{fmt}", tmp_path / f"b.{fmt}"
    args = ["roundtrip", "--trials", "4", "--seed", "9", "--shots", "1000",
            "--format", fmt]
    assert run(args + ["--out", str(a)]) == 0
    assert run(args + ["--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_output_header_embeds_config_hash(tmp_path):
    out = tmp_path / "r.csv"
    run(["fierz-check", "--trials", "3", "--format", "csv", "--out", str(out)])
    lines = out.read_text().splitlines()
    assert lines[0].startswith("# diractomo ")
    assert lines[1].startswith("# config_sha256=")
