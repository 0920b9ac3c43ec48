"""Command-line interface: schema errors, engine rules, output contracts."""

import csv
import json
import math
from pathlib import Path

import numpy as np
import pytest

from floqcool import cli
from floqcool.output import Family, write_family


def run_cli(*argv):
    return cli.main([str(a) for a in argv])


def write_yaml(tmp_path, text, name="cfg.yaml"):
    path = tmp_path / name
    path.write_text(text)
    return path


# ------------------------------------------------------------- config schema

def test_unknown_field_reports_path(tmp_path, capsys):
    cfg = write_yaml(tmp_path, "cooling:\n  L: 4\n  gg: 0.3\n")
    assert run_cli("cool", "--config", cfg, "--out", tmp_path / "o") == 2
    assert "cooling.gg: unknown field" in capsys.readouterr().err


def test_nested_type_error_reports_path(tmp_path, capsys):
    cfg = write_yaml(tmp_path, "cooling:\n  noise:\n    gamma_decay: nope\n")
    assert run_cli("cool", "--config", cfg, "--out", tmp_path / "o") == 2
    assert "cooling.noise.gamma_decay" in capsys.readouterr().err


def test_unknown_section_rejected(tmp_path, capsys):
    cfg = write_yaml(tmp_path, "cooking:\n  L: 4\n")
    assert run_cli("cool", "--config", cfg, "--out", tmp_path / "o") == 2
    assert "unknown section" in capsys.readouterr().err


def test_dataclass_value_error_becomes_config_error(tmp_path, capsys):
    cfg = write_yaml(tmp_path, "xxz:\n  N: 3\n")
    assert run_cli("xxz", "--config", cfg, "--out", tmp_path / "o") == 2
    assert "xxz" in capsys.readouterr().err


def test_bool_is_not_an_int(tmp_path, capsys):
    cfg = write_yaml(tmp_path, "cooling:\n  L: true\n")
    assert run_cli("cool", "--config", cfg, "--out", tmp_path / "o") == 2
    assert "cooling.L" in capsys.readouterr().err


# -------------------------------------------------------------- engine rules

def test_xxz_refuses_gaussian(tmp_path, capsys):
    assert run_cli("xxz", "--engine", "gaussian", "--out", tmp_path / "o") == 2
    assert "not matchgates" in capsys.readouterr().err


def test_stabilize_refuses_gaussian(tmp_path, capsys):
    code = run_cli("stabilize-1q", "--engine", "gaussian", "--out", tmp_path / "o")
    assert code == 2
    assert "not matchgates" in capsys.readouterr().err


DECAY_YAML = """\
cooling:
  L: 4
  cycles: 20
  noise: {gamma_decay: 0.016, gamma_dephase: 0.006}
"""


def test_gaussian_refuses_untracked_decay(tmp_path, capsys):
    cfg = write_yaml(tmp_path, DECAY_YAML)
    code = run_cli("cool", "--config", cfg, "--engine", "gaussian",
                   "--out", tmp_path / "o")
    assert code == 2
    assert "not a Gaussian channel" in capsys.readouterr().err


def test_auto_picks_dense_for_decay(tmp_path):
    cfg = write_yaml(tmp_path, DECAY_YAML)
    out = tmp_path / "o"
    assert run_cli("cool", "--config", cfg, "--out", out) == 0
    manifest = json.loads((out / "manifest.json").read_text())
    assert manifest["engine"] == "dense"


def test_trajectories_keep_decay_on_gaussian(tmp_path):
    cfg = write_yaml(tmp_path, DECAY_YAML)
    out = tmp_path / "o"
    code = run_cli("cool", "--config", cfg, "--engine", "gaussian",
                   "--trajectories", 20, "--out", out)
    assert code == 0
    manifest = json.loads((out / "manifest.json").read_text())
    assert manifest["engine"] == "gaussian"
    assert manifest["trajectories"] == 20


def test_auto_picks_gaussian_without_decay(tmp_path):
    cfg = write_yaml(tmp_path, "cooling:\n  L: 4\n  cycles: 20\n")
    out = tmp_path / "o"
    assert run_cli("cool", "--config", cfg, "--out", out) == 0
    manifest = json.loads((out / "manifest.json").read_text())
    assert manifest["engine"] == "gaussian"


def test_dense_size_limit_is_a_config_error(tmp_path, capsys):
    cfg = write_yaml(tmp_path, "cooling:\n  L: 12\n  cycles: 5\n")
    code = run_cli("cool", "--config", cfg, "--engine", "dense",
                   "--out", tmp_path / "o")
    assert code == 2
    assert "qubit limit" in capsys.readouterr().err


# ------------------------------------------------------------ output contract

def read_csv(path):
    header = []
    with open(path) as fh:
        rows = []
        for line in fh:
            if line.startswith("#"):
                header.append(line)
            else:
                rows.append(line.rstrip("\n"))
    table = list(csv.reader(rows))
    return header, table[0], table[1:]


def test_cool_outputs_and_headers(tmp_path):
    cfg = write_yaml(tmp_path, "cooling:\n  L: 4\n  cycles: 30\n")
    out = tmp_path / "o"
    assert run_cli("cool", "--config", cfg, "--seed", 3, "--out", out) == 0
    for name in ("energies.csv", "occupations.csv", "manifest.json"):
        assert (out / name).exists()
    header, columns, rows = read_csv(out / "energies.csv")
    joined = "".join(header)
    resolved = json.loads(joined.split("# config: ")[1].split("\n")[0])
    assert resolved["cooling"]["L"] == 4
    assert resolved["cooling"]["seed"] == 3
    assert "radians" in joined  # units/conventions block
    assert "energy_ratio" in joined  # per-column description
    assert columns == ["cycle", "energy", "energy_ratio"]
    assert len(rows) == 30
    for row in rows:
        for cell in row[1:]:
            assert math.isfinite(float(cell))
    manifest = json.loads((out / "manifest.json").read_text())
    assert manifest["seed"] == 3
    assert set(manifest["versions"]) == {"python", "numpy", "scipy", "floqcool"}
    assert manifest["wall_time_s"] > 0
    assert sorted(manifest["outputs"]) == ["energies.csv", "occupations.csv"]


def test_writer_rejects_non_finite(tmp_path):
    fam = Family("t", ("a", "b"), ("one", "two"), [(1, float("nan"))])
    with pytest.raises(ValueError, match="non-finite"):
        write_family(tmp_path, fam, ["x"])


def test_writer_rejects_ragged_rows(tmp_path):
    fam = Family("t", ("a", "b"), ("one", "two"), [(1.0,)])
    with pytest.raises(ValueError, match="row 0"):
        write_family(tmp_path, fam, ["x"])


def test_xxz_outputs(tmp_path):
    cfg = write_yaml(tmp_path, "xxz:\n  N: 6\n  cycles: 12\n")
    out = tmp_path / "o"
    assert run_cli("xxz", "--config", cfg, "--out", out) == 0
    _, columns, rows = read_csv(out / "currents.csv")
    assert columns == ["cycle", "bond", "current"]
    assert len(rows) == 12 * 5  # one row per cycle per bond
    _, columns, rows = read_csv(out / "pumping.csv")
    assert columns == ["cycle", "pumping_current", "total_particles"]
    manifest = json.loads((out / "manifest.json").read_text())
    assert manifest["engine"] == "dense"
    assert "ness_pumping_current" in manifest["summary"]


def test_rdm_outputs(tmp_path):
    cfg = write_yaml(tmp_path, "cooling:\n  L: 4\n  cycles: 40\n")
    out = tmp_path / "o"
    assert run_cli("rdm", "--config", cfg, "--out", out) == 0
    _, columns, rows = read_csv(out / "correlators.csv")
    assert columns == ["site_j", "site_k", "correlator", "correlator_purified"]
    assert len(rows) == 4 * 3 // 2
    _, columns, rows = read_csv(out / "entropy.csv")
    assert [r[0] for r in rows] == ["1", "2", "3"]


def test_compare_prep_outputs(tmp_path):
    cfg = write_yaml(tmp_path, "compare:\n  L_values: [4, 6]\n")
    out = tmp_path / "o"
    assert run_cli("compare-prep", "--config", cfg, "--out", out) == 0
    _, columns, rows = read_csv(out / "compare.csv")
    assert columns == ["L", "gates", "fid_diss", "fid_unit",
                       "fid_diss_pure", "fid_unit_pure"]
    # noiseless: the compiled ladder hits the vacuum essentially exactly
    assert float(rows[0][3]) > 1 - 1e-9
    assert float(rows[1][3]) > 1 - 1e-9
    assert int(rows[1][1]) == 15  # L(L-1)/2 gates at L = 6


def test_stabilize_outputs(tmp_path):
    out = tmp_path / "o"
    assert run_cli("stabilize-1q", "--seed", 4, "--out", out) == 0
    _, columns, rows = read_csv(out / "bloch.csv")
    assert columns == ["cycle", "x", "y", "z", "distance_to_target"]
    assert len(rows) == 300
    assert float(rows[-1][4]) < 0.1


def test_secular_optimize(tmp_path):
    cfg = write_yaml(tmp_path,
                     "secular:\n  L: 6\n  g: 0.28\n  J: 0.2\n  optimize: true\n")
    out = tmp_path / "o"
    assert run_cli("secular", "--config", cfg, "--out", out) == 0
    manifest = json.loads((out / "manifest.json").read_text())
    assert abs(manifest["summary"]["h_opt"] - 1.608) < 0.01
    assert (out / "h_scan.csv").exists()


# --------------------------------------------------------------------- sweep

SWEEP_YAML = """\
sweep:
  command: cool
  vary:
    cooling.g: [0.12, 0.28]
    cooling.L: [3, 4]
  workers: 2
cooling:
  cycles: 25
"""


def test_sweep_grid_and_determinism(tmp_path):
    cfg = write_yaml(tmp_path, SWEEP_YAML)
    out1, out2 = tmp_path / "s1", tmp_path / "s2"
    assert run_cli("sweep", "--config", cfg, "--out", out1) == 0
    assert run_cli("sweep", "--config", cfg, "--out", out2) == 0
    _, columns, rows = read_csv(out1 / "sweep.csv")
    assert columns[:3] == ["point", "cooling.g", "cooling.L"]
    assert len(rows) == 4
    assert [r[1] for r in rows] == ["0.12", "0.12", "0.28", "0.28"]
    for rel in ("sweep.csv", "point-0000/energies.csv",
                "point-0003/occupations.csv"):
        assert (out1 / rel).read_bytes() == (out2 / rel).read_bytes()
    # distinct seeds per point unless varied explicitly
    seeds = [
        json.loads((out1 / f"point-{i:04d}" / "manifest.json").read_text())["seed"]
        for i in range(4)
    ]
    assert seeds == [0, 1, 2, 3]


def test_sweep_rejects_bad_path(tmp_path, capsys):
    cfg = write_yaml(tmp_path, "sweep:\n  command: cool\n  vary:\n    g: [1]\n")
    assert run_cli("sweep", "--config", cfg, "--out", tmp_path / "o") == 2
    assert "sweep.vary" in capsys.readouterr().err


def test_sweep_validates_points_before_running(tmp_path, capsys):
    cfg = write_yaml(
        tmp_path,
        "sweep:\n  command: cool\n  vary:\n    cooling.L: [4, 99]\n"
        "cooling:\n  cycles: 5\n  engine: dense\n",
    )
    assert run_cli("sweep", "--config", cfg, "--out", tmp_path / "o") == 2
    assert "qubit limit" in capsys.readouterr().err


# ------------------------------------------------------------------ validate

def test_validate_subset(tmp_path, capsys):
    out = tmp_path / "o"
    assert run_cli("validate", "--checks", "channel-algebra", "--out", out) == 0
    assert "[PASS] channel algebra" in capsys.readouterr().out
    _, columns, rows = read_csv(out / "validation.csv")
    assert columns == ["check", "passed", "elapsed_s", "detail"]
    assert rows[0][1] == "true"


def test_validate_unknown_check(tmp_path, capsys):
    code = run_cli("validate", "--checks", "nope", "--out", tmp_path / "o")
    assert code == 2
    assert "unknown check" in capsys.readouterr().err
