"""Command-line surface.

Claims covered:
    - every subcommand produces its documented format and exit code 0
    - JSON outputs validate against the schemas shipped in docs/schema
    - CSV outputs carry the documented headers and config comments
    - bad inputs exit 2, numeric failures exit 3
    - outputs are byte-stable across repeated runs and thread counts
"""

import json
import math
import subprocess
import sys
from pathlib import Path

import jsonschema
import pytest
from pytest import approx

import ugwspectra as u

import oracles

SCHEMA_DIR = Path(__file__).resolve().parent.parent / "docs" / "schema"


def run_cli(*args, expect=0):
    proc = subprocess.run(
        [sys.executable, "-m", "ugwspectra.cli", *args],
        capture_output=True, text=True)
    assert proc.returncode == expect, proc.stderr
    return proc.stdout


def load_schema(name):
    return json.loads((SCHEMA_DIR / f"{name}.schema.json").read_text())


def parse_csv(text):
    comments, header, rows = [], None, []
    for line in text.splitlines():
        if line.startswith("#"):
            comments.append(line)
        elif header is None:
            header = line
        elif line:
            rows.append(line.split(","))
    return comments, header, rows


# -- JSON commands -----------------------------------------------------------

def test_classify_json_schema_and_verdict():
    out = json.loads(run_cli("classify", "--dist", "poisson:2"))
    jsonschema.validate(out, load_schema("classify"))
    assert out["payload"]["verdict"] == "NoExtendedStatesL2"


def test_classify_degenerate_payload():
    out = json.loads(run_cli("classify", "--dist", "pmf:0=0.5,1=0.5"))
    assert out["payload"]["verdict"] == "DegenerateAtomic"
    assert out["payload"]["atom_mass"] == approx(0.5)


def test_alphabeta_json_schema():
    out = json.loads(run_cli("alphabeta", "--dist", "poisson:1",
                             "--pool", "30000", "--iters", "120"))
    jsonschema.validate(out, load_schema("alphabeta"))
    payload = out["payload"]
    assert payload["converged"] is True
    assert payload["combined"]["f_plus"] == approx(0.567, abs=0.03)
    assert payload["beta_star"]["diverging"] is False


def test_nullity_json_schema():
    out = json.loads(run_cli("nullity", "--dist", "er:1", "--n", "300",
                             "--seeds", "3"))
    jsonschema.validate(out, load_schema("nullity"))
    assert len(out["payload"]["per_seed"]) == 3
    assert 0.3 < out["payload"]["nullity_mean"] < 0.6


def test_report_json_schema():
    out = json.loads(run_cli("report", "--dist", "er:2", "--n", "500",
                             "--seeds", "2", "--eps", "0.2,0.1"))
    jsonschema.validate(out, load_schema("report"))
    ens = out["payload"]["ensemble"]
    assert set(ens["window_mass"]) == {"0.2", "0.1"}
    assert out["payload"]["theory"]["verdict"] == "NoExtendedStatesL2"


# -- CSV commands ------------------------------------------------------------

def test_locus_csv_row_counts():
    _, header, rows = parse_csv(run_cli("locus", "--c", "1"))
    assert header == "c,q"
    assert len(rows) == 1
    _, _, rows3 = parse_csv(run_cli("locus", "--c", "3"))
    assert len(rows3) == 3
    qs = sorted(float(r[1]) for r in rows3)
    assert qs[0] < 1 / math.e < qs[2]


def test_locus_grid_mode():
    comments, header, rows = parse_csv(
        run_cli("locus", "--c-min", "1", "--c-max", "2", "--steps", "5"))
    assert header == "c,q"
    assert len(rows) == 5
    assert any("c_min=1" in c for c in comments)


def test_mcurve_csv_shape():
    _, header, rows = parse_csv(
        run_cli("mcurve", "--dist", "poisson:1", "--grid-n", "11"))
    assert header == "z,M,Mprime,Msecond"
    assert len(rows) == 11
    last = [float(x) for x in rows[-1]]
    assert last[0] == 1.0
    assert last[1] == approx(math.exp(-1.0), rel=1e-12)


def test_sweep_csv_format():
    _, header, rows = parse_csv(
        run_cli("sweep", "--dist", "poisson:2", "--t-grid", "1e-1,1e-2",
                "--pool", "2000", "--iters", "60"))
    assert header == "t,E_root,stderr_root,t_times_E,s_star,trend"
    assert len(rows) == 2
    assert rows[0][5] in {"DecayingToZero", "Plateau", "Inconclusive"}
    assert float(rows[0][0]) == 0.1


def test_spectrum_csv_and_comments():
    comments, header, rows = parse_csv(
        run_cli("spectrum", "--dist", "er:2", "--n", "30", "--seed", "1"))
    assert header == "lambda"
    assert len(rows) == 30
    assert any("edge_count=" in c for c in comments)
    assert any("solver_residual=" in c for c in comments)
    vals = [float(r[0]) for r in rows]
    assert vals == sorted(vals)


def test_kmcurve_csv():
    _, header, rows = parse_csv(run_cli("kmcurve", "--d", "3", "--grid-n", "9"))
    assert header == "lambda,density,cdf"
    mid = [float(x) for x in rows[4]]
    assert mid[0] == approx(0.0, abs=1e-12)
    assert mid[1] == approx(math.sqrt(2) / (3 * math.pi), rel=1e-9)
    assert mid[2] == approx(0.5, abs=1e-9)


def test_kmcurve_degree_two_arcsine():
    # the d=2 integrand is finite only after the (d-2)^2 rewrite; this row
    # set used to abort with a quadrature error
    _, _, rows = parse_csv(run_cli("kmcurve", "--d", "2", "--grid-n", "7"))
    vals = [[float(x) for x in r] for r in rows]
    assert vals[3][1] == approx(1.0 / (2 * math.pi), rel=1e-12)
    assert vals[3][2] == approx(0.5, abs=1e-9)
    # U shape: density grows toward the edges of the support
    assert vals[1][1] > vals[2][1] > vals[3][1]
    assert vals[0][2] == 0.0 and vals[-1][2] == 1.0


def test_csv_17_digit_round_trip():
    _, _, rows = parse_csv(run_cli("locus", "--c", "1"))
    q = float(rows[0][1])
    # printed with enough digits that parsing back is bit-exact
    assert q == u.bg_locus(1.0)[0]
    assert abs(q - oracles.OMEGA) < 1e-12


# -- exit codes ----------------------------------------------------------------

@pytest.mark.parametrize("args", [
    ("classify", "--dist", "poisson:-1"),
    ("classify", "--dist", "nosuch:1"),
    ("sweep", "--dist", "poisson:2", "--t-grid", "1e-2,1e-1",
     "--pool", "2000", "--iters", "60"),
    ("sweep", "--dist", "poisson:2", "--t-grid", "1e-1,1e-6",
     "--pool", "2000", "--iters", "60"),
    ("nullity", "--dist", "dirac:5", "--n", "3", "--seeds", "1"),
    ("nosuchcommand",),
])
def test_usage_errors_exit_2(args):
    run_cli(*args, expect=2)


def test_numeric_errors_exit_3():
    run_cli("spectrum", "--dist", "er:1", "--n", "5000", expect=3)


# -- determinism ---------------------------------------------------------------

def test_repeat_runs_are_byte_identical():
    a = run_cli("sweep", "--dist", "poisson:2", "--t-grid", "1e-1,1e-2",
                "--pool", "2000", "--iters", "60")
    b = run_cli("sweep", "--dist", "poisson:2", "--t-grid", "1e-1,1e-2",
                "--pool", "2000", "--iters", "60")
    assert a == b


def test_thread_count_does_not_change_output():
    a = run_cli("alphabeta", "--dist", "poisson:3", "--pool", "30000",
                "--iters", "120")
    b = run_cli("alphabeta", "--dist", "poisson:3", "--pool", "30000",
                "--iters", "120", "--threads", "4")
    da, db = json.loads(a), json.loads(b)
    assert da["payload"] == db["payload"]


def test_out_flag_writes_file(tmp_path):
    target = tmp_path / "roots.csv"
    run_cli("locus", "--c", "3", "--out", str(target))
    assert target.exists()
    _, header, rows = parse_csv(target.read_text())
    assert header == "c,q"
    assert len(rows) == 3
