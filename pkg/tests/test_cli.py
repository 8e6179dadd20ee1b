import csv
import io
import json
import subprocess
import sys

import pytest

from partialsp.cli import CAP, FAILS, OK, USAGE, main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_axioms_json(capsys):
    code, out, _ = run(capsys, "axioms", "--mech", "ps", "--setting", "3x3unit", "--output", "json")
    doc = json.loads(out)
    assert code == FAILS  # lower invariance and SP fail for PS
    holds = {a: r["holds"] for a, r in doc["reports"].items()}
    assert holds["swap_monotonic"] and holds["upper_invariant"] and not holds["lower_invariant"]


def test_axioms_restricted_profile(capsys):
    code, out, _ = run(
        capsys, "axioms", "--mech", "nbm", "--setting", "4x4unit", "--axiom", "swap_monotonic",
        "--profile", "abcd,acbd,bcad,bcad", "--agent", "1", "--misreport", "acbd", "--output", "json",
    )
    rep = json.loads(out)["reports"]["swap_monotonic"]
    assert code == FAILS and rep["witness"]["objects"] == ["b", "c"] and rep["coverage"] == "partial"


def test_axioms_table(capsys, ivan_path):
    code, out, _ = run(capsys, "axioms", "--table", str(ivan_path), "--axiom", "weakly_strategyproof")
    assert code == OK and "partial" in out


def test_verify_and_rho(capsys):
    assert run(capsys, "verify", "--mech", "ps", "--setting", "3x3unit", "--r", "3/4")[0] == OK
    code, out, _ = run(capsys, "verify", "--mech", "ps", "--setting", "3x3unit", "--r", "0.8", "--output", "json")
    doc = json.loads(out)
    assert code == FAILS and doc["witness"]["gain"] != "0/1"
    code, out, _ = run(capsys, "rho", "--mech", "ps", "--setting", "3x3unit", "--bisect", "1e-3", "--output", "json")
    doc = json.loads(out)
    assert code == OK and doc["value"] == "3/4"


def test_rho_precondition_failure(capsys):
    code, _, err = run(capsys, "rho", "--mech", "nbm", "--setting", "4x4unit")
    assert code == FAILS


def test_counterexample(capsys, tmp_path):
    out_file = tmp_path / "cx.json"
    code, out, _ = run(
        capsys, "counterexample", "--setting", "3x3unit", "--r", "1/3", "--utility", "2,1,0",
        "--out", str(out_file), "--output", "json",
    )
    assert code == OK and json.loads(out)["transcript"]["gain"] == "1/18"
    assert "mechanism" in json.loads(out_file.read_text())


def test_allocate_and_share(capsys):
    code, out, _ = run(capsys, "allocate", "--mech", "ps", "--setting", "3x3unit", "--profile", "abc,bac,bca", "--output", "json")
    assert code == OK and json.loads(out)["allocation"][0] == ["3/4", "0/1", "1/4"]
    code, out, _ = run(capsys, "share", "--r", "1", "--samples", "100", "--output", "json")
    assert json.loads(out)["estimate"] == 1.0


def test_table1_csv(capsys):
    code, out, _ = run(capsys, "table1", "--mech", "rsd", "--output", "csv")
    rows = list(csv.reader(io.StringIO(out)))
    assert code == OK and rows[0][0] == "mechanism" and rows[1][0] == "rsd"


@pytest.mark.parametrize(
    "argv",
    [
        ["verify", "--mech", "ps", "--setting", "3x3unit", "--r", "2"],
        ["verify", "--mech", "ps", "--setting", "3x3unit", "--r", "1/2", "--agent", "1"],
        ["allocate", "--mech", "ps", "--setting", "3x3unit", "--profile", "abc,abd,abc"],
        ["axioms", "--mech", "ps", "--setting", "3x3unit", "--output", "csv"],
        ["axioms", "--mech", "rank_min", "--setting", "3x3unit", "--symmetry", "anonymous"],
        ["axioms", "--mech", "ps", "--setting", "nine"],
    ],
)
def test_usage_errors(capsys, argv):
    assert run(capsys, *argv)[0] == USAGE


def test_cap_refusal(capsys):
    code, _, err = run(capsys, "axioms", "--mech", "ps", "--setting", "4x4unit", "--symmetry", "none", "--profile-cap", "100")
    assert code == CAP and "refused" in err


def test_module_entry_point():
    res = subprocess.run(
        [sys.executable, "-m", "partialsp", "allocate", "--mech", "rsd", "--setting", "2x2unit", "--profile", "ab,ab"],
        capture_output=True, text=True,
    )
    assert res.returncode == 0 and "1/2" in res.stdout
