import json
import subprocess
import sys

import pytest

from rfe_lab.cli import main


def write_config(path, doc):
    path.write_text(json.dumps(doc))
    return str(path)


def test_fig2_smoke(tmp_path, capsys):
    out = tmp_path / "fig2"
    assert main(["fig2", "--out", str(out)]) == 0
    for name in ("config.json", "signal.csv", "spectrum.csv", "signal.svg", "spectrum.svg", "manifest.json"):
        assert (out / name).exists(), name
    stdout = capsys.readouterr().out
    assert f"wrote {out / 'signal.csv'}" in stdout
    # The echoed config is canonical and re-parseable.
    doc = json.loads((out / "config.json").read_text())
    assert doc["schema"] == "rfe-lab/1"
    assert doc["campaign"]["kind"] == "fig2"


def test_seed_override_lands_in_echoed_config(tmp_path):
    out = tmp_path / "fig2"
    assert main(["fig2", "--out", str(out), "--seed", "99"]) == 0
    assert json.loads((out / "config.json").read_text())["campaign"]["seed"] == 99


def test_ft_compare_table(capsys):
    assert main(["ft-compare"]) == 0
    stdout = capsys.readouterr().out
    assert "QPE minimum distance: 17" in stdout
    assert "algorithm" in stdout and "physical_qubits" in stdout
    rows = [line for line in stdout.splitlines() if line.strip().startswith(("rfe", "qpe"))]
    assert len(rows) == 2 * 28  # default d range 3..30


def test_ft_compare_csv_output(tmp_path, capsys):
    assert main(["ft-compare", "--d-min", "16", "--d-max", "18", "--out", str(tmp_path)]) == 0
    lines = (tmp_path / "comparison.csv").read_text().splitlines()
    assert lines[0] == "algorithm,d,physical_qubits,cu_calls,qec_cycles,feasible"
    assert len(lines) == 1 + 2 * 3
    assert "wrote" in capsys.readouterr().out


def test_ft_compare_rejects_reversed_range(capsys):
    assert main(["ft-compare", "--d-min", "10", "--d-max", "5"]) == 2
    assert "config error" in capsys.readouterr().err


def test_validate_pass_line(tmp_path, capsys):
    cfg = write_config(
        tmp_path / "v.json",
        {
            "schema": "rfe-lab/1",
            "campaign": {
                "kind": "validate",
                "epsilon": 1.0,
                "delta": 0.2,
                "lambda": 0.0,
                "trials": 5,
                "seed": 4,
            },
        },
    )
    out = tmp_path / "run"
    assert main(["validate", "--config", cfg, "--out", str(out)]) == 0
    stdout = capsys.readouterr().out
    assert "PASS: 0/5 failures" in stdout
    assert (out / "report.json").exists()
    assert (out / "trials.jsonl").exists()


def test_validate_trials_flag_overrides_config(tmp_path, capsys):
    cfg = write_config(
        tmp_path / "v.json",
        {
            "schema": "rfe-lab/1",
            "campaign": {
                "kind": "validate",
                "epsilon": 1.0,
                "delta": 0.2,
                "lambda": 0.0,
                "trials": 50,
            },
        },
    )
    out = tmp_path / "run"
    assert main(["validate", "--config", cfg, "--out", str(out), "--trials", "3"]) == 0
    assert "PASS: 0/3 failures" in capsys.readouterr().out


def test_bad_config_exits_2_with_field_path(tmp_path, capsys):
    cfg = write_config(
        tmp_path / "bad.json",
        {"schema": "rfe-lab/1", "campaign": {"kind": "validate", "delta": 1.5}},
    )
    assert main(["validate", "--config", cfg, "--out", str(tmp_path / "x")]) == 2
    err = capsys.readouterr().err
    assert "config error" in err and "campaign.delta" in err


def test_kind_mismatch_between_config_and_command(tmp_path, capsys):
    cfg = write_config(tmp_path / "f2.json", {"schema": "rfe-lab/1", "campaign": {"kind": "fig2"}})
    assert main(["fig3", "--config", cfg, "--out", str(tmp_path / "x")]) == 2
    assert "campaign.kind" in capsys.readouterr().err


def test_vacuous_bound_exits_2(tmp_path, capsys):
    cfg = write_config(
        tmp_path / "v.json",
        {
            "schema": "rfe-lab/1",
            "campaign": {"kind": "validate", "lambda": 60.0, "trials": 2},
        },
    )
    assert main(["validate", "--config", cfg, "--out", str(tmp_path / "x")]) == 2
    assert "vacuous bound" in capsys.readouterr().err


def test_thread_count_validated(tmp_path, capsys):
    assert main(["fig2", "--out", str(tmp_path), "--threads", "0"]) == 2
    assert "--threads" in capsys.readouterr().err


def test_fig4_flag_overrides(tmp_path):
    out = tmp_path / "fig4"
    assert (
        main(
            [
                "fig4",
                "--out",
                str(out),
                "--lambda-list",
                "0.1,0.001",
                "--epsilon-decades=-2,-1",
                "--delta",
                "0.05",
                "--k-strategy",
                "harmonic",
            ]
        )
        == 0
    )
    doc = json.loads((out / "config.json").read_text())
    assert doc["campaign"]["lambdas"] == [0.1, 0.001]
    assert doc["campaign"]["epsilon_min"] == pytest.approx(1e-2)
    assert doc["campaign"]["delta"] == 0.05
    assert doc["campaign"]["k_strategy"] == "harmonic"
    lines = (out / "runtime.csv").read_text().splitlines()
    assert len(lines) > 1


def test_console_script_is_installed():
    result = subprocess.run(
        [sys.executable, "-m", "rfe_lab.cli", "ft-compare", "--d-min", "17", "--d-max", "18"],
        capture_output=True,
        text=True,
    )
    assert result.returncode == 0
    assert "QPE minimum distance" in result.stdout
