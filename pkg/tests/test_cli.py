import csv
import io
import json
import subprocess
import sys

import numpy as np
import pytest
from scipy import integrate

from dirac_isr.cli import EXIT_CONVERGENCE, EXIT_NO_STATES, EXIT_OK, EXIT_USAGE, UNRECONCILED, main

from .frozen_values import ELECTRO_E_A, ELECTRO_E_B, SPINSYM_E_A, SPINSYM_E_B


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def parse_csv(text):
    """Meta lines and named blocks of the CLI's CSV output."""
    meta, blocks, name, lines = {}, {}, "main", []
    for line in text.splitlines():
        if line.startswith("# ") and "=" in line:
            k, v = line[2:].split("=", 1)
            meta[k] = v
        elif line.startswith("# "):
            if lines:
                blocks[name] = list(csv.DictReader(io.StringIO("\n".join(lines))))
            name, lines = line[2:], []
        elif line.strip():
            lines.append(line)
    if lines:
        blocks[name] = list(csv.DictReader(io.StringIO("\n".join(lines))))
    return meta, blocks


# -- exit codes -------------------------------------------------------------------

def test_unknown_flag_is_usage_error(capsys):
    with pytest.raises(SystemExit) as info:
        main(["spectrum", "--bogus"])
    assert info.value.code == EXIT_USAGE


def test_lambda_and_v1_together_is_usage_error(capsys):
    code, _, err = run(capsys, "spectrum", "--lambda", "1", "--v1", "-1")
    assert code == EXIT_USAGE and "either" in err


def test_nonpositive_lambda_is_usage_error(capsys):
    assert run(capsys, "spectrum", "--lambda", "-2")[0] == EXIT_USAGE


def test_no_bound_states_exit(capsys):
    code, out, err = run(capsys, "spectrum", "--v1", "1")
    assert code == EXIT_NO_STATES and out == ""


def test_convergence_failure_exit(capsys):
    # a tolerance no level can meet
    code, _, _ = run(capsys, "verify", "--n-max", "1", "--tol", "1e-30")
    assert code == EXIT_CONVERGENCE


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "dirac_isr", "tables", "2"], capture_output=True, text=True)
    assert proc.returncode == EXIT_OK
    assert proc.stdout.splitlines()[1].startswith("n,branch,E_exact")


# -- spectrum -------------------------------------------------------------------------

def test_spectrum_csv_columns_and_values(capsys):
    code, out, _ = run(capsys, "spectrum")
    assert code == EXIT_OK
    meta, blocks = parse_csv(out)
    rows = blocks["main"]
    assert list(rows[0]) == ["n", "branch", "nu", "E_exact", "E_approx", "method", "residual", "approx_provenance"]
    assert [float(r["E_exact"]) for r in rows] == pytest.approx(SPINSYM_E_A, abs=1e-11)
    assert all(float(r["residual"]) <= 1e-10 for r in rows)


def test_spectrum_json_mirrors_csv(capsys):
    _, out_csv, _ = run(capsys, "spectrum", "--family", "electrostatic", "--branch", "B", "--n-max", "3")
    _, out_json, _ = run(capsys, "spectrum", "--family", "electrostatic", "--branch", "B", "--n-max", "3", "--format", "json")
    doc = json.loads(out_json)
    rows = parse_csv(out_csv)[1]["main"]
    assert [r["E_exact"] for r in doc["records"]] == pytest.approx([float(r["E_exact"]) for r in rows], rel=1e-11)
    assert [r["E_exact"] for r in doc["records"]] == pytest.approx(ELECTRO_E_B[:3], abs=1e-10)
    assert {r["approx_provenance"] for r in doc["records"]} == {UNRECONCILED}


def test_spectrum_general_family_uses_oracle(capsys):
    code, out, _ = run(capsys, "spectrum", "--family", "general", "--v1", "-1", "--s1", "-1", "--n-max", "2")
    assert code == EXIT_OK
    rows = parse_csv(out)[1]["main"]
    assert all(r["method"].startswith("oracle") for r in rows)
    assert [float(r["E_exact"]) for r in rows] == pytest.approx(SPINSYM_E_A[:2], abs=1e-6)


def test_pseudospin_lambda_sign(capsys):
    _, out, _ = run(capsys, "spectrum", "--family", "pseudospin", "--branch", "B", "--n-max", "2", "--format", "json")
    doc = json.loads(out)
    assert doc["V1"] == 1.0
    assert [r["E_exact"] for r in doc["records"]] == pytest.approx([-e for e in SPINSYM_E_A[:2]], abs=1e-12)


def test_determinism(tmp_path):
    paths = [tmp_path / "a.csv", tmp_path / "b.csv"]
    for p in paths:
        assert main(["spectrum", "--family", "electrostatic", "--out", str(p)]) == EXIT_OK
    assert paths[0].read_bytes() == paths[1].read_bytes()


# -- config files ---------------------------------------------------------------------------

def test_config_file_and_flag_precedence(tmp_path, capsys):
    conf = tmp_path / "run.conf"
    conf.write_text("# electrostatic run\nfamily = electrostatic\nbranch = B\nn_max = 2\nlambda = 1\n")
    _, out, _ = run(capsys, "spectrum", "--config", str(conf), "--format", "json")
    doc = json.loads(out)
    assert doc["family"] == "electrostatic" and len(doc["records"]) == 2
    assert doc["records"][0]["branch"] == "B"
    _, out, _ = run(capsys, "spectrum", "--config", str(conf), "--branch", "A", "--format", "json")
    assert json.loads(out)["records"][0]["E_exact"] == pytest.approx(ELECTRO_E_A[0], abs=1e-10)


def test_config_file_errors(tmp_path, capsys):
    bad = tmp_path / "bad.conf"
    bad.write_text("colour = blue\n")
    assert run(capsys, "spectrum", "--config", str(bad))[0] == EXIT_USAGE
    assert run(capsys, "spectrum", "--config", str(tmp_path / "missing.conf"))[0] == EXIT_USAGE


# -- tables ------------------------------------------------------------------------------------

@pytest.mark.parametrize("which,frozen", [(1, SPINSYM_E_A), (2, SPINSYM_E_B), (3, ELECTRO_E_A)])
def test_tables_exact_columns(capsys, which, frozen):
    code, out, _ = run(capsys, "tables", str(which))
    rows = parse_csv(out)[1]["main"]
    assert code == EXIT_OK and len(rows) == 7
    assert [float(r["E_exact"]) for r in rows] == pytest.approx(frozen, abs=5e-7)


def test_table3_marks_approx_column(capsys):
    _, out, _ = run(capsys, "tables", "3")
    rows = parse_csv(out)[1]["main"]
    assert {r["approx_provenance"] for r in rows} == {UNRECONCILED}


def test_table4_both_branches(capsys):
    _, out, _ = run(capsys, "tables", "4")
    rows = parse_csv(out)[1]["main"]
    assert list(rows[0]) == ["n", "E_branch_A", "E_branch_B"]
    assert float(rows[0]["E_branch_B"]) == pytest.approx(-0.96589, abs=1e-4)
    assert [float(r["E_branch_A"]) for r in rows] == pytest.approx(ELECTRO_E_A, abs=5e-7)


# -- figure data ---------------------------------------------------------------------------------

def test_figdata_1(capsys):
    _, out, _ = run(capsys, "figdata", "1")
    rows = parse_csv(out)[1]["main"]
    assert len(rows) == 781 and list(rows[0]) == ["nu", "F_exact", "F_approx", "pole"]


def test_figdata_2(capsys):
    _, out, _ = run(capsys, "figdata", "2")
    meta, blocks = parse_csv(out)
    rows = blocks["main"]
    assert len(rows) == 800
    E = np.array([float(r["E"]) for r in rows])
    fl = np.array([float(r["floor_f"]) for r in rows])
    neg = fl[E < 0]
    assert np.count_nonzero(np.diff(neg)) == 2
    f = np.array([float(r["f"]) for r in rows])
    assert np.all(np.diff(f) > 0)


# -- wavefunction ------------------------------------------------------------------------------------

def test_wavefunction_output(capsys):
    code, out, _ = run(capsys, "wavefunction", "--level", "1", "--points", "2001")
    assert code == EXIT_OK
    meta, blocks = parse_csv(out)
    rows = blocks["main"]
    assert list(rows[0]) == ["x", "re_psiA", "im_psiA", "re_psiB", "im_psiB"]
    x = np.array([float(r["x"]) for r in rows])
    dens = sum(np.array([float(r[c]) for r in rows]) ** 2 for c in ("re_psiA", "im_psiA", "re_psiB", "im_psiB"))
    assert integrate.trapezoid(dens, x) == pytest.approx(1.0, abs=1e-4)
    mid = len(rows) // 2
    assert x[mid] == 0 and abs(float(rows[mid]["re_psiA"])) < 1e-6
    assert float(meta["origin_mismatch"]) <= 1e-8


def test_wavefunction_bad_level(capsys):
    assert run(capsys, "wavefunction", "--level", "0")[0] == EXIT_USAGE


def test_wavefunction_general_unsupported(capsys):
    assert run(capsys, "wavefunction", "--family", "general", "--level", "1")[0] == EXIT_USAGE


# -- verify ----------------------------------------------------------------------------------------------

def test_verify_passes_and_reports_discrepancies(capsys):
    code, out, _ = run(capsys, "verify", "--n-max", "3")
    assert code == EXIT_OK
    meta, blocks = parse_csv(out)
    assert meta["all_pass"] == "1"
    rows = blocks["main"]
    assert all(float(r["abs_deviation"]) <= 1e-4 for r in rows)
    quantities = {r["quantity"] for r in blocks["discrepancies"]}
    assert quantities == {"nu_approx_rel_error", "phase_offset_from_integer", "electrostatic_approx_abs_error"}


def test_verify_electrostatic(capsys):
    code, out, _ = run(capsys, "verify", "--family", "electrostatic", "--n-max", "2")
    rows = parse_csv(out)[1]["main"]
    assert code == EXIT_OK
    assert [float(r["E_oracle"]) for r in rows] == pytest.approx(ELECTRO_E_A[:2], abs=1e-8)
