"""Command-line surface: pinned outputs, exit codes, file round-trips."""

import json
import math

import pytest

from heckedist.cli import main


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_unknown_group_is_usage_error(capsys):
    code, _, _ = run_cli(capsys, "frobnicate")
    assert code == 2


def test_unknown_subcommand_is_usage_error(capsys):
    code, _, _ = run_cli(capsys, "hecke", "frobnicate")
    assert code == 2


def test_domain_error_is_exit_one(capsys):
    code, out, err = run_cli(capsys, "measure", "eval", "--kind", "pl0",
                             "--interval", "2:1")
    assert code == 1
    payload = json.loads(err.strip())
    assert "error" in payload and "message" in payload
    assert "\n" not in err.strip()


def test_field_info(capsys):
    code, out, _ = run_cli(capsys, "--field", "Q(sqrt 5)", "field", "info")
    assert code == 0
    data = json.loads(out)
    assert data["degree"] == 2
    assert data["disc"] == 5
    assert data["fundamental_unit"] == ["0", "1"]
    assert data["fundamental_unit_norm"] == -1


def test_field_factor(capsys):
    code, out, _ = run_cli(capsys, "--field", "Q(sqrt 5)", "field",
                           "factor", "--p", "11")
    assert code == 0
    data = json.loads(out)
    assert len(data["primes"]) == 2
    assert all(pr["norm"] == 11 for pr in data["primes"])


def test_hecke_verify_relation_pinned(capsys):
    code, out, _ = run_cli(capsys, "hecke", "verify-relation",
                           "--p", "2", "--k", "1", "--m", "1")
    assert code == 0
    data = json.loads(out)
    assert data == {"T16": 1, "T4": 2, "T1": 4}


def test_hecke_spoly(capsys):
    code, out, _ = run_cli(capsys, "hecke", "spoly", "--p", "3", "--k", "2")
    assert code == 0
    data = json.loads(out)
    assert data["coeffs"] == [9, -9, 1]


def test_hecke_eigenvalue_roundtrip(capsys):
    code, out, _ = run_cli(capsys, "hecke", "eigenvalue", "--p", "2",
                           "--lam", "2.5")
    assert code == 0
    data = json.loads(out)
    nu = complex(data["nu"]["re"], data["nu"]["im"])
    assert nu.real == 0.0 and nu.imag > 0
    assert abs(data["lam"] - 2.5) < 1e-12


def test_measure_phi_spoly_pinned(capsys):
    code, out, _ = run_cli(capsys, "measure", "phi", "--p", "2:0",
                           "--spoly", "1")
    assert code == 0
    data = json.loads(out)
    assert abs(float(data["value"])) < 1e-8
    assert data["exact"] == 0


def test_measure_eval(capsys):
    code, out, _ = run_cli(capsys, "measure", "eval", "--kind", "pl0",
                           "--interval", "0.25:25.25")
    assert code == 0
    data = json.loads(out)
    assert abs(data["value"] - (25 - 1 / 12)) < 1e-8


def test_measure_box(capsys):
    spec = json.dumps({"dim": 2, "q": [1], "e": {"2": [0.3, 1.2]},
                       "xi": [0, 0], "t": 4.0})
    code, out, _ = run_cli(capsys, "measure", "box", "--spec", spec,
                           "--family", "pl")
    assert code == 0
    data = json.loads(out)
    assert data["value"] > 0


def test_kloosterman_eval_pinned(capsys):
    code, out, _ = run_cli(capsys, "kloosterman", "eval", "--c", "5",
                           "--r", "1", "--rp", "1")
    assert code == 0
    data = json.loads(out)
    golden = (3 - math.sqrt(5)) / 2
    assert abs(data["value"]["re"] - golden) < 1e-9
    assert abs(data["value"]["im"]) < 1e-12


def test_kloosterman_eval_quadratic(capsys):
    # equals form for a value with a leading dash (sqrt5 = -1 + 2 omega)
    code, out, _ = run_cli(capsys, "--field", "Q(sqrt 5)", "kloosterman",
                           "eval", "--c=-1,2", "--r", "1,0", "--rp", "1,0")
    assert code == 0
    data = json.loads(out)
    assert "re" in data["value"]


def test_kloosterman_scan_csv(capsys, tmp_path):
    out_file = tmp_path / "scan.csv"
    code, _, _ = run_cli(capsys, "--out", str(out_file), "--format", "csv",
                         "kloosterman", "scan", "--max-norm", "20")
    assert code == 0
    lines = out_file.read_text().strip().split("\n")
    assert lines[0].startswith("c,")
    assert len(lines) == 21


def test_equidist_pipeline(capsys, tmp_path):
    box_spec = json.dumps({"dim": 2, "q": [1], "e": {"2": [0.3, 1.2]},
                           "xi": [0, 0], "t": 4.0})
    data_file = tmp_path / "ds.jsonl"
    code, _, _ = run_cli(capsys, "--field", "Q(sqrt 73)", "--seed", "11",
                         "--out", str(data_file),
                         "equidist", "synth", "--box", box_spec,
                         "--primes", "2:0,3:0", "--count", "2000")
    assert code == 0
    assert data_file.exists()

    intervals = json.dumps({"2:0": [0.0, 2 * math.sqrt(2)],
                            "3:0": [0.0, 2 * math.sqrt(3)]})
    report_file = tmp_path / "report.csv"
    code, out, _ = run_cli(capsys, "--field", "Q(sqrt 73)",
                           "--out", str(report_file),
                           "equidist", "run", "--data", str(data_file),
                           "--box", box_spec, "--intervals", intervals,
                           "--covolume", "1.0", "--t-grid", "2,3,4",
                           "--calibrate")
    assert code == 0
    lines = report_file.read_text().strip().split("\n")
    assert lines[0] == "t,count,prediction,ratio,v1"
    assert len(lines) == 4
    final_ratio = float(lines[-1].split(",")[3])
    assert final_ratio == pytest.approx(1.0, abs=0.1)


def test_equidist_index(capsys):
    code, out, _ = run_cli(capsys, "--level", "6", "equidist", "index")
    assert code == 0
    data = json.loads(out)
    assert data["index"] == 12


def test_equidist_tau(capsys, tmp_path):
    tau_file = tmp_path / "tau.csv"
    code, out, _ = run_cli(capsys, "equidist", "tau", "--upto", "1000",
                           "--tau-out", str(tau_file))
    assert code == 0
    data = json.loads(out)
    assert data["lambda_2"] == 0.75
    assert data["tau2"] == -24
    assert data["tp2_2"] == "-23/16"
    lines = tau_file.read_text().strip().split("\n")
    assert lines[0] == "n,tau"
    assert lines[1] == "1,1" and lines[2] == "2,-24"


def test_out_flag_after_subcommand(capsys, tmp_path):
    # global flags are accepted both before the group and after the leaf
    out_file = tmp_path / "s.json"
    code, _, _ = run_cli(capsys, "hecke", "spoly", "--p", "2", "--k", "1",
                         "--out", str(out_file))
    assert code == 0
    data = json.loads(out_file.read_text())
    assert data["coeffs"] == [-2, 1]
