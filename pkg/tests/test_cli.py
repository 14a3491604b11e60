import json
import math
import subprocess
import sys

import pytest

from viciouskit.cli import main


def run_json(capsys, argv):
    code = main(argv)
    out = capsys.readouterr().out
    return code, json.loads(out)


def test_count_subcommand(capsys):
    code, data = run_json(capsys, ["count", "--start", "0", "--end", "0",
                                   "--time", "2"])
    assert code == 0
    assert data["schema_version"] == 1
    assert data["count"] == "2"
    assert data["probability"] == {"num": "1", "den": "2", "float": 0.5}


def test_survive_subcommand(capsys):
    code, data = run_json(capsys, ["survive", "--start", "0,2", "--time", "2"])
    assert code == 0
    assert data["probability"]["num"] == "5"
    assert data["probability"]["den"] == "8"


def test_survival_matches_library(capsys):
    from viciouskit.densities import survival
    import numpy as np

    code, data = run_json(capsys, ["survival", "--at", "0,1", "--time", "1"])
    assert code == 0
    assert data["probability"] == pytest.approx(survival(1.0, np.array([0.0, 1.0])))


def test_density_family_selected_by_horizon(capsys):
    _, inf_data = run_json(capsys, ["density", "--at=-0.3,0.7", "--time", "1"])
    assert inf_data["family"] == "p"
    _, fin_data = run_json(capsys, ["density", "--at=-0.3,0.7", "--time", "1",
                                    "--horizon", "2"])
    assert fin_data["family"] == "g"
    assert inf_data["density"] > 0 and fin_data["density"] > 0
    assert inf_data["density"] != fin_data["density"]


def test_simulate_walker_json_and_csv(capsys, tmp_path):
    argv = ["simulate", "--model", "walker", "--n", "2", "--start", "0,2",
            "--horizon", "1", "--scale", "4", "--samples", "20", "--seed", "3"]
    code, data = run_json(capsys, argv)
    assert code == 0
    assert data["samples"] == 20
    assert data["acceptance"] <= 1.0
    assert data["time_grid"][0] == 0.0

    out = tmp_path / "paths.csv"
    assert main(argv + ["--format", "csv", "--out", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "sample_id,t,x_1,x_2"
    assert len(lines) == 1 + 20 * len(data["time_grid"])


def test_simulate_deterministic_bytes(tmp_path):
    argv = ["simulate", "--model", "sde-p", "--n", "2", "--time", "0.4",
            "--step", "0.005", "--samples", "15", "--seed", "7",
            "--format", "csv"]
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(argv + ["--out", str(a)]) == 0
    assert main(argv + ["--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_rmt_subcommand(capsys, tmp_path):
    argv = ["rmt", "--ensemble", "GUE", "--n", "2", "--samples", "500",
            "--seed", "1"]
    code, data = run_json(capsys, argv)
    assert code == 0
    # E sum lambda_i^2 / entries = variance * (n + 1) / ... sanity: positive
    assert data["second_moment"] > 0
    out = tmp_path / "spec.csv"
    assert main(argv + ["--format", "csv", "--out", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "draw_id,lambda_1,lambda_2"
    assert len(lines) == 501


def test_verify_exit_code_and_schema(capsys):
    code, data = run_json(capsys, ["verify", "--suite", "combinatorics",
                                   "--samples", "300"])
    assert code == 0
    assert data["n_fail"] == 0
    assert data["n_pass"] == len(data["reports"])
    assert all(r["verdict"] == "pass" for r in data["reports"])


def test_verify_identities_alias(capsys):
    code, data = run_json(capsys, ["verify-identities", "--samples", "300"])
    assert code == 0
    assert data["suite"] == "identities"


def test_console_script_installed():
    r = subprocess.run(["viciouskit", "count", "--start", "0", "--end", "0",
                        "--time", "2"], capture_output=True, text=True)
    assert r.returncode == 0
    assert json.loads(r.stdout)["count"] == "2"
