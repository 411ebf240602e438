import json
from pathlib import Path

import numpy as np
import pytest

from nlspec.cli import main
from nlspec.reporting import render_json

PLATEAU_TOML = """\
[kernel]
family = "cauchy_product"
dim = 1

[potential]
family = "plateau_well"
params = [5.0, 1.0, 2.0]

[grid]
length = 60.0
points = 4096

[analysis]
criteria = ["essential_spectrum", "existence", "flat_infinite", "birman_schwinger"]
r = 2.0
n_max = 8
delta_scan = [0.25, 0.5, 1.0, 2.0]
oracle_points = 512
oracle_length = 40.0
"""

SUPERFLAT_TOML = """\
[kernel]
family = "cauchy_product"
dim = 1

[potential]
family = "superflat_well"
params = [5.0]

[grid]
length = 60.0
points = 4096

[analysis]
criteria = ["essential_spectrum"]
r = 2.0
oracle_points = 512
oracle_length = 40.0
"""

EVOLVE_TOML = """\
[kernel]
family = "gaussian"
dim = 1

[potential]
family = "gaussian_well"
params = [2.0]

[grid]
length = 30.0
points = 256

[analysis]
criteria = []
r = 2.0
oracle_points = 256

[evolve]
t_max = 2.0
dt = 0.01
scheme = "rk4"
"""


@pytest.fixture
def plateau_config(tmp_path):
    path = tmp_path / "plateau.toml"
    path.write_text(PLATEAU_TOML)
    return path


def test_spectrum_command(plateau_config, tmp_path, capsys):
    out = tmp_path / "out"
    rc = main(["spectrum", "--config", str(plateau_config), "--out", str(out)])
    assert rc == 0
    doc = json.loads((out / "report.json").read_text())
    assert doc["spectral_summary"]["mu0"] == -5.0
    assert doc["spectral_summary"]["mu1"] == 0.0
    assert doc["oracle"]["count_below_mu0"] >= 1
    csv = (out / "eigenvalues.csv").read_text().splitlines()
    assert csv[0] == "index,value"
    assert len(csv) == 512 + 1
    # audit fields: tool version, tolerances, eigenvalue dump pointer
    assert doc["tool"]["version"]
    assert "certification" in doc["tolerances"]
    assert doc["oracle"]["all_eigenvalues_path"] == "eigenvalues.csv"


def test_check_command_full_report(plateau_config, tmp_path):
    out = tmp_path / "out"
    rc = main(["check", "--config", str(plateau_config), "--out", str(out)])
    assert rc == 0
    doc = json.loads((out / "report.json").read_text())
    verdicts = {c["id"]: c["verdict"] for c in doc["criteria"]}
    assert verdicts["essential_spectrum"] == "SATISFIED"
    assert verdicts["existence"] == "SATISFIED"
    assert verdicts["flat_infinite"] == "SATISFIED"
    assert verdicts["birman_schwinger"] == "INCONCLUSIVE"   # divergent I_V
    assert all(row["sound"] for row in doc["cross_validation"])
    # every criterion embeds an auditable checklist
    for c in doc["criteria"]:
        if c["verdict"] == "SATISFIED":
            assert c["checklist"] and all(item["passed"] for item in c["checklist"])
    assert doc["tool"]["name"] == "nlspec"


def test_exit_codes_config_errors(tmp_path):
    # missing file
    assert main(["spectrum", "--config", str(tmp_path / "nope.toml")]) == 2
    # unknown family
    bad = tmp_path / "bad.toml"
    bad.write_text(PLATEAU_TOML.replace("cauchy_product", "bogus_family"))
    assert main(["spectrum", "--config", str(bad), "--out", str(tmp_path)]) == 2
    # cube too large for the box
    bad2 = tmp_path / "bad2.toml"
    bad2.write_text(PLATEAU_TOML.replace("r = 2.0", "r = 40.0"))
    assert main(["spectrum", "--config", str(bad2), "--out", str(tmp_path)]) == 2
    # verdicts never change the exit code: a violated criterion still exits 0
    ok = tmp_path / "ok.toml"
    ok.write_text(PLATEAU_TOML.replace("cauchy_product", "gaussian"))
    assert main(["check", "--config", str(ok), "--out", str(tmp_path / "o2")]) == 0


def test_offset_potential_requires_force(tmp_path):
    cfg = tmp_path / "superflat.toml"
    cfg.write_text(SUPERFLAT_TOML)
    assert main(["spectrum", "--config", str(cfg), "--out", str(tmp_path / "a")]) == 2
    rc = main(["spectrum", "--config", str(cfg), "--out", str(tmp_path / "b"),
               "--force-offset"])
    assert rc == 0
    doc = json.loads((tmp_path / "b" / "report.json").read_text())
    assert doc["warnings"]
    assert "decay_offset" in doc["warnings"][0]
    assert doc["spectral_summary"]["v_min"] == -5.0


def test_numerical_failure_exit_code(tmp_path):
    cfg = tmp_path / "evolve.toml"
    cfg.write_text(EVOLVE_TOML.replace("dt = 0.01", "dt = 100.0"))
    assert main(["evolve", "--config", str(cfg), "--out", str(tmp_path / "o")]) == 3


def test_count_command(tmp_path):
    cfg = tmp_path / "count.toml"
    cfg.write_text(PLATEAU_TOML + "\nmode_sizes = [1, 3, 5]\n")
    out = tmp_path / "out"
    rc = main(["count", "--config", str(cfg), "--out", str(out)])
    assert rc == 0
    doc = json.loads((out / "report.json").read_text())
    counts = [row["certified"] for row in doc["certified_counts"]]
    sizes = [row["basis_size"] for row in doc["certified_counts"]]
    assert sizes == [1, 3, 5]
    assert counts[0] >= 1
    assert counts == sorted(counts)


def test_evolve_command(tmp_path):
    cfg = tmp_path / "evolve.toml"
    cfg.write_text(EVOLVE_TOML)
    out = tmp_path / "out"
    rc = main(["evolve", "--config", str(cfg), "--out", str(out)])
    assert rc == 0
    doc = json.loads((out / "report.json").read_text())
    assert "growth_rate" in doc["evolution"]
    assert doc["evolution"]["oracle_top_eigenvalue"] is not None
    lines = (out / "trajectory.csv").read_text().splitlines()
    assert lines[0] == "t,mass,l2norm"
    assert len(lines) == doc["evolution"]["steps"] + 1


def test_json_config_accepted(tmp_path):
    cfg = {
        "kernel": {"family": "cauchy_product", "dim": 1},
        "potential": {"family": "plateau_well", "params": [5.0, 1.0, 2.0]},
        "grid": {"length": 60.0, "points": 4096},
        "analysis": {"criteria": ["essential_spectrum"], "r": 2.0,
                     "oracle_points": 256, "oracle_length": 40.0},
    }
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps(cfg))
    rc = main(["spectrum", "--config", str(path), "--out", str(tmp_path / "o")])
    assert rc == 0


def test_round_trip_reproducibility(plateau_config, tmp_path):
    # run, re-run from the echoed config, compare numerical sections bitwise
    out1 = tmp_path / "r1"
    assert main(["check", "--config", str(plateau_config), "--out", str(out1)]) == 0
    doc1 = json.loads((out1 / "report.json").read_text())
    echo = tmp_path / "echo.json"
    echo.write_text(json.dumps(doc1["config_echo"]))
    out2 = tmp_path / "r2"
    assert main(["check", "--config", str(echo), "--out", str(out2)]) == 0
    doc2 = json.loads((out2 / "report.json").read_text())
    for section in ("spectral_summary", "criteria", "cross_validation", "oracle"):
        assert render_json(doc1[section]) == render_json(doc2[section])


def test_report_floats_17_digits(plateau_config, tmp_path):
    out = tmp_path / "out"
    main(["spectrum", "--config", str(plateau_config), "--out", str(out)])
    text = (out / "report.json").read_text()
    # pi-adjacent value is serialized to full double precision
    assert "-3.141" in text
    value = json.loads(text)["spectral_summary"]["a_min"]
    assert value == float(f"{value:.17g}")
