"""Golden tests for the command-line interface."""

import json
import subprocess
import sys
from fractions import Fraction

import pytest

from lucasdensity.cli import main


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


# ---------------------------------------------------------------------------
# density
# ---------------------------------------------------------------------------


def test_density_table_row(capsys):
    code, out, _ = run_cli(capsys, "density", "--gamma", "3", "1", "--radicand", "8", "--d", "6")
    assert code == 0
    assert "17/64 (0.265625)" in out
    assert "case = Q0" in out


def test_density_fibonacci(capsys):
    code, out, _ = run_cli(capsys, "density", "--a1", "1", "--a2", "-1", "--d", "2")
    assert code == 0
    assert "delta = 2/3 (0.666666)" in out
    assert "case = SWITCH_MINUS1" in out


def test_density_negative_gamma_tokens(capsys):
    code, out, _ = run_cli(
        capsys, "density", "--gamma", "-13/14", "3/14", "--radicand", "-3", "--d", "3"
    )
    assert code == 0
    assert "delta = 3/4" in out


def test_density_reducible_exit_2(capsys):
    code, _, err = run_cli(capsys, "density", "--a1", "2", "--a2", "1", "--d", "3")
    assert code == 2
    assert "invalid input" in err


def test_density_torsion_exit_2(capsys):
    code, _, err = run_cli(capsys, "density", "--a1", "1", "--a2", "1", "--d", "3")
    assert code == 2
    assert "invalid input" in err


def test_density_norm_validation(capsys):
    code, _, err = run_cli(
        capsys, "density", "--gamma", "1", "1", "--radicand", "8", "--d", "2"
    )
    assert code == 2
    assert "norm 1" in err


def test_density_rational_gamma_rejected(capsys):
    code, _, err = run_cli(
        capsys, "density", "--gamma", "1", "0", "--radicand", "5", "--d", "2"
    )
    assert code == 2


def test_density_requires_exactly_one_input(capsys):
    code, _, err = run_cli(capsys, "density", "--d", "2")
    assert code == 2
    code, _, err = run_cli(
        capsys, "density", "--a1", "1", "--a2", "-1",
        "--gamma", "3", "1", "--radicand", "8", "--d", "2",
    )
    assert code == 2


def test_density_json_round_trip(capsys):
    code, out, _ = run_cli(
        capsys, "density", "--gamma", "48/50", "7/50", "--radicand", "-4",
        "--d", "10", "--format", "json",
    )
    assert code == 0
    doc = json.loads(out)
    delta = Fraction(doc["delta"]["num"], doc["delta"]["den"])
    assert delta == Fraction(235, 1152)
    assert doc["case"] == "GAUSS_HI"
    assert doc["zeta"] == "i"
    assert doc["h"] == 2
    recomputed = sum(
        Fraction(t["coeff"]["num"], t["coeff"]["den"])
        * Fraction(t["value"]["num"], t["value"]["den"])
        for t in doc["trace"]
    )
    assert recomputed == delta


def test_density_csv(capsys):
    code, out, _ = run_cli(
        capsys, "density", "--a1", "1", "--a2", "-1", "--d", "2", "--format", "csv"
    )
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "delta,delta_plus,delta_minus,case"
    assert lines[1] == "2/3,5/12,1/4,SWITCH_MINUS1"


def test_density_oracle_check(capsys):
    code, out, _ = run_cli(
        capsys, "density", "--a1", "1", "--a2", "-1", "--d", "2", "--oracle-check"
    )
    assert code == 0
    assert "contained" in out


# ---------------------------------------------------------------------------
# explain
# ---------------------------------------------------------------------------


def test_explain_trivial(capsys):
    code, out, _ = run_cli(capsys, "explain", "--a1", "1", "--a2", "-1", "--d", "1")
    assert code == 0
    assert "trivial: density 1" in out


def test_explain_gauss_hi_narrative(capsys):
    code, out, _ = run_cli(
        capsys, "explain", "--gamma", "48/50", "7/50", "--radicand", "-4", "--d", "10"
    )
    assert code == 0
    assert "case = GAUSS_HI" in out
    assert "k = 1" in out
    assert "d_odd = 5" in out
    assert "m = 2" in out
    assert "scale = 47/48" in out
    assert "5/24" in out
    assert "delta = 235/1152" in out


def test_explain_q0_terms(capsys):
    code, out, _ = run_cli(
        capsys, "explain", "--gamma", "3", "1", "--radicand", "8", "--d", "6"
    )
    assert code == 0
    assert "case = Q0" in out
    assert "S(d=6, e=1, h=2, nu=1)" in out
    assert "S(d=6, e=4, h=2, nu=1)" in out


# ---------------------------------------------------------------------------
# tables
# ---------------------------------------------------------------------------


def test_tables_all_rows_match(capsys):
    code, out, _ = run_cli(capsys, "tables")
    assert code == 0
    assert "18/18 rows match" in out
    assert "661/8064" in out  # the annotated discrepancy note


def test_tables_json(capsys):
    code, out, _ = run_cli(capsys, "tables", "--format", "json")
    assert code == 0
    rows = json.loads(out)
    assert len(rows) == 18
    assert all(r["match"] for r in rows)
    noted = [r for r in rows if "annotation" in r]
    assert len(noted) == 1 and noted[0]["d"] == 26


def test_tables_csv(capsys):
    code, out, _ = run_cli(capsys, "tables", "--format", "csv")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0].startswith("gamma,d,case,")
    assert len(lines) == 19


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------


def test_verify_fibonacci_small(capsys):
    code, out, _ = run_cli(
        capsys, "verify", "--a1", "1", "--a2", "-1", "--d", "2",
        "--limit", "20000", "--threads", "1",
    )
    assert code == 0
    assert "PASS" in out
    assert "closed form delta = 2/3" in out


def test_verify_d1_exact(capsys):
    code, out, _ = run_cli(
        capsys, "verify", "--a1", "1", "--a2", "-1", "--d", "1",
        "--limit", "5000", "--threads", "1",
    )
    assert code == 0
    assert "deviation = 0.000000" in out


def test_verify_limit_floor(capsys):
    code, _, err = run_cli(
        capsys, "verify", "--a1", "1", "--a2", "-1", "--d", "2", "--limit", "50"
    )
    assert code == 2
    assert "invalid input" in err


def test_verify_json(capsys):
    code, out, _ = run_cli(
        capsys, "verify", "--a1", "1", "--a2", "-1", "--d", "2",
        "--limit", "20000", "--threads", "1", "--format", "json",
    )
    assert code == 0
    doc = json.loads(out)
    assert doc["passed"] is True
    assert doc["eligible"] > 2000
    assert Fraction(doc["delta"]["num"], doc["delta"]["den"]) == Fraction(2, 3)


def test_verify_dump_ranks(tmp_path, capsys):
    path = tmp_path / "dump.csv"
    code, _, _ = run_cli(
        capsys, "verify", "--a1", "1", "--a2", "-1", "--d", "2",
        "--limit", "2000", "--threads", "1", "--dump-ranks", str(path),
    )
    assert code == 0
    lines = path.read_text().strip().splitlines()
    assert lines[0] == "p,rank,jacobi,divisible"
    assert len(lines) > 100


def test_verify_strict_on_passing_run(capsys):
    code, out, _ = run_cli(
        capsys, "verify", "--a1", "1", "--a2", "-1", "--d", "2",
        "--limit", "20000", "--threads", "1", "--strict",
    )
    assert code == 0


# ---------------------------------------------------------------------------
# module entry point
# ---------------------------------------------------------------------------


def test_module_invocation():
    proc = subprocess.run(
        [sys.executable, "-m", "lucasdensity.cli",
         "density", "--a1", "1", "--a2", "-1", "--d", "2"],
        capture_output=True, text=True, timeout=120,
    )
    assert proc.returncode == 0
    assert "2/3" in proc.stdout


def test_unknown_subcommand_is_bad_input(capsys):
    code, _, _ = run_cli(capsys, "frobnicate")
    assert code == 2
