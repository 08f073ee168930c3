import json

import pytest

from pqcapprox import cli, sim


def run_cli(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_synth_constant(capsys):
    code, out, _ = run_cli(capsys, "synth", "--coeffs", "1")
    doc = json.loads(out)
    assert code == 0
    assert doc["residual"] == 0.0
    assert doc["angles"] == [0.0]


def test_synth_emits_circuit(tmp_path, capsys):
    path = tmp_path / "line.txt"
    code, out, _ = run_cli(
        capsys, "synth", "--coeffs", "0,0.9", "--emit-circuit", str(path)
    )
    assert code == 0
    circ = sim.circuit_from_text(path.read_text())
    assert circ.width == 1


def test_synth_rejects_mixed_parity(capsys):
    code, _, err = run_cli(capsys, "synth", "--coeffs", "0.5,0.5")
    assert code == 2
    assert "error" in err


def test_report_qsp_constant(capsys):
    code, out, _ = run_cli(
        capsys, "report", "--experiment", "qsp", "--target", "poly:1", "--tol", "1e-8"
    )
    doc = json.loads(out)
    assert code == 0 and doc["pass"]


def test_report_bernstein_small(capsys, tmp_path):
    out_path = tmp_path / "report.json"
    code, out, _ = run_cli(
        capsys,
        "report",
        "--experiment",
        "bernstein",
        "--target",
        "abs_centered",
        "--d",
        "1",
        "--n",
        "4",
        "--seed",
        "5",
        "--output",
        str(out_path),
    )
    doc = json.loads(out)
    assert code == 0 and doc["pass"]
    assert doc["resources"]["width"] >= 3
    on_disk = json.loads(out_path.read_text())
    assert "timestamp" in on_disk


def test_report_deterministic_modulo_timestamp(tmp_path, capsys):
    args = [
        "report", "--experiment", "localization", "--K", "2",
        "--eps", "0.25", "--seed", "9",
    ]
    _, out1, _ = run_cli(capsys, *args)
    _, out2, _ = run_cli(capsys, *args)
    assert out1 == out2


def test_report_taylor_halfsine(capsys):
    code, out, _ = run_cli(
        capsys,
        "report",
        "--experiment",
        "taylor",
        "--target",
        "halfsine",
        "--K",
        "4",
        "--points-per-axis",
        "41",
    )
    doc = json.loads(out)
    assert code == 0 and doc["pass"]
    assert doc["sup_error"] <= 0.0625 + doc["tol_agg"]
    assert doc["bound_name"] == "local-taylor"


def test_report_trig(capsys):
    code, out, _ = run_cli(
        capsys,
        "report",
        "--experiment",
        "trig",
        "--target",
        "trig:1=0.45;-1=0.45",
        "--points-per-axis",
        "32",
    )
    doc = json.loads(out)
    assert code == 0 and doc["pass"]


def test_report_config_file(tmp_path, capsys):
    cfg = {"experiment": "qsp", "target": "poly:0,0.5", "tol": 1e-8, "seed": 1}
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps(cfg))
    code, out, _ = run_cli(capsys, "report", "--config", str(path))
    assert code == 0


def test_report_invalid_config(capsys, tmp_path):
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps({"experiment": "warp-drive"}))
    code, _, err = run_cli(capsys, "report", "--config", str(path))
    assert code == 2
    assert json.loads(err.strip())["error"]


def test_shots_require_seed():
    with pytest.raises(ValueError):
        cli.ExperimentConfig(experiment="bernstein", shots=100)


def test_build_and_eval_round_trip(tmp_path, capsys):
    path = tmp_path / "mono.txt"
    code, out, _ = run_cli(
        capsys, "build", "--kind", "monomial", "--c", "0.5", "--alpha", "1,2",
        "--emit-circuit", str(path),
    )
    assert code == 0
    code, out, _ = run_cli(capsys, "eval", "--circuit", str(path), "--x", "0.8,0.5")
    assert code == 0
    assert json.loads(out)["value"] == pytest.approx(0.1, abs=1e-9)


def test_build_localization(tmp_path, capsys):
    path = tmp_path / "loc.txt"
    code, out, _ = run_cli(
        capsys, "build", "--kind", "localization", "--K", "2", "--eps", "0.25",
        "--emit-circuit", str(path),
    )
    assert code == 0
    doc = json.loads(out)
    assert doc["width"] == 1
    code, out, _ = run_cli(capsys, "eval", "--circuit", str(path), "--x", "0.7")
    v = json.loads(out)["value"]
    assert 0.5 < v < 0.75


def test_compare_fnn(capsys):
    code, out, _ = run_cli(
        capsys, "compare-fnn", "--d", "20", "--s", "5", "--eps", "0.1",
        "--lambda0", "0.5",
    )
    doc = json.loads(out)
    assert code == 0
    assert doc["params"]["log10_param_ratio"] < 0  # circuit needs fewer parameters
