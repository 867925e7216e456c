"""Command line interface: exit codes, report schema, determinism, config
precedence."""

import json
import subprocess
import sys

import pytest

from mvlab.cli import main


def run_cli(args):
    """Invoke the entry point in-process, capturing SystemExit from argparse."""
    try:
        return main(list(args))
    except SystemExit as exc:
        return exc.code


def test_verify_elliptic_report(tmp_path, capsys):
    out = tmp_path / "report.json"
    code = run_cli(["verify", "--suite", "elliptic", "--out", str(out)])
    assert code == 0
    data = json.loads(out.read_text())
    assert data["suite"] == "elliptic"
    assert data["pass"] is True
    assert data["wall_ms"] > 0
    for check in data["checks"]:
        assert set(check) == {"name", "value", "expected", "tol", "pass", "err"}
        assert check["pass"] is True


def test_verify_exit_and_roundtrip(tmp_path):
    out = tmp_path / "rep.json"
    assert run_cli(["verify", "--suite", "mcf", "--out", str(out)]) == 0
    # report subcommand re-renders losslessly
    csv_out = tmp_path / "rep.csv"
    assert run_cli(["report", "--in", str(out), "--format", "csv",
                    "--out", str(csv_out)]) == 0
    lines = csv_out.read_text().splitlines()
    assert lines[0] == "name,value,expected,tol,pass,err"
    assert len(lines) == len(json.loads(out.read_text())["checks"]) + 1

    json_out = tmp_path / "rep2.json"
    assert run_cli(["report", "--in", str(out), "--format", "json",
                    "--out", str(json_out)]) == 0
    assert json.loads(json_out.read_text()) == json.loads(out.read_text())


def test_sweep_deterministic(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    args = ["sweep", "--quantity", "J", "--geometry", "euclidean3",
            "--field", "harmonic-quadratic", "--rmin", "0.5", "--rmax", "1.5",
            "--steps", "5"]
    assert run_cli(args + ["--out", str(a)]) == 0
    assert run_cli(args + ["--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    lines = a.read_text().splitlines()
    assert lines[0] == "parameter,value,error_estimate,monotone_ok"
    assert len(lines) == 6
    for line in lines[1:]:
        val = float(line.split(",")[1])
        assert abs(val) <= 1e-7          # harmonic J stays zero
        assert line.endswith("true")


def test_sweep_jbar_json(tmp_path):
    out = tmp_path / "s.json"
    code = run_cli(["sweep", "--quantity", "jbar", "--geometry", "mcf-circle",
                    "--rmin", "0.5", "--rmax", "2.0", "--steps", "4",
                    "--format", "json", "--out", str(out)])
    assert code == 0
    rows = json.loads(out.read_text())["rows"]
    assert len(rows) == 4
    for row in rows:
        assert row["monotone_ok"] is True
        assert row["value"] == pytest.approx(1.5203469010662809, rel=1e-12)


def test_usage_errors(tmp_path):
    assert run_cli(["sweep", "--quantity", "nope"]) == 2
    assert run_cli(["sweep", "--quantity", "J", "--geometry", "mars"]) == 2
    assert run_cli(["sweep", "--quantity", "theta", "--geometry",
                    "mcf-circle"]) == 2
    assert run_cli(["verify", "--suite", "bogus"]) == 2
    assert run_cli(["report", "--in", str(tmp_path / "missing.json")]) == 2


def test_tol_scale_tightens_flat_checks(tmp_path):
    out = tmp_path / "r.json"
    code = run_cli(["verify", "--suite", "reduced", "--tol-scale", "0.1",
                    "--out", str(out)])
    data = json.loads(out.read_text())
    flat = [c for c in data["checks"] if "flat" in c["name"]]
    assert flat and all(c["pass"] for c in flat)


def test_config_file_with_flag_override(tmp_path):
    cfg = tmp_path / "mvlab.cfg"
    cfg.write_text("quantity = J\ngeometry = euclidean3\n"
                   "field = harmonic-quadratic\nsteps = 3  # comment\n")
    out = tmp_path / "c.csv"
    code = run_cli(["sweep", "--config", str(cfg), "--quantity", "J",
                    "--steps", "4", "--out", str(out)])
    assert code == 0
    assert len(out.read_text().splitlines()) == 5  # flag wins over config


def test_console_script_installed():
    proc = subprocess.run([sys.executable, "-m", "mvlab.cli", "sweep",
                           "--quantity", "jbar", "--geometry", "mcf-circle",
                           "--steps", "3"],
                          capture_output=True, text=True, timeout=120)
    assert proc.returncode == 0
    assert proc.stdout.startswith("parameter,value,error_estimate,monotone_ok")


def test_ricci_suite_geometry_filter(tmp_path):
    out = tmp_path / "ricci.json"
    code = run_cli(["verify", "--suite", "ricci", "--geometry", "gaussian",
                    "--out", str(out)])
    assert code == 0
    names = [c["name"] for c in json.loads(out.read_text())["checks"]]
    assert names == ["jhat_ihat_flat", "soliton_identities_flat"]


def test_jhat_sweep_flat_equality(tmp_path):
    out = tmp_path / "jhat.csv"
    code = run_cli(["sweep", "--quantity", "jhat", "--geometry", "gaussian",
                    "--rmin", "0.2", "--rmax", "0.8", "--steps", "7",
                    "--out", str(out)])
    assert code == 0
    lines = out.read_text().splitlines()
    assert len(lines) == 8
    for line in lines[1:]:
        _, value, _, ok = line.split(",")
        assert abs(float(value) - 1.0) <= 1e-4
        assert ok == "true"


def test_jobs_parallel_suite(tmp_path, monkeypatch):
    monkeypatch.setenv("MVLAB_JOBS", "4")
    out = tmp_path / "p.json"
    assert run_cli(["verify", "--suite", "mcf", "--out", str(out)]) == 0
    data = json.loads(out.read_text())
    assert [c["name"] for c in data["checks"]] == [
        "gaussian_density_n1", "jbar_ibar_equal_density", "mcf_monotone",
        "liyau_decomposition_circle"]
