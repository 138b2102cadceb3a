import csv
import io
import json
import subprocess
import sys

import pytest

from pslet import RunRecord
from pslet.cli import main


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out)
    return code, out.getvalue()


def test_solve_json_round_trip():
    code, text = run("solve", "--alpha", "10", "--state", "4s", "--format", "json")
    assert code == 0
    rec = RunRecord.from_json(text)
    assert rec.to_json() == text.rstrip("\n")
    assert rec.input == {"potential": "-1/(r+10)", "ell": 0, "nr": 3, "order": 20, "prec_bits": 192}
    assert len(rec.partials) == 21
    assert rec.pade["stab"]["n"] == 3 and rec.pade["stab"]["m"] == 3
    assert rec.series_stab["index"] == 12
    assert rec.diagnostics["diverging"] is False
    assert float(rec.pade["best"]) == pytest.approx(-0.0116383071, abs=1e-9)


def test_solve_negative_potential_text():
    code, text = run("solve", "--potential", "-1/r", "--ell", "0", "--nr", "2", "--format", "json")
    assert code == 0
    assert float(json.loads(text)["partials"][-1]) == pytest.approx(-1 / 18, abs=1e-15)


def test_solve_csv():
    code, text = run("solve", "--potential", "r^2/2", "--state", "1s", "--order", "6", "--format", "csv")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(text)))
    kinds = {r["kind"] for r in rows}
    assert kinds == {"partial", "pade", "pade_best"}
    assert sum(r["kind"] == "partial" for r in rows) == 7


def test_solve_markdown_with_oracle():
    code, text = run("solve", "--alpha", "10", "--state", "4s", "--oracle")
    assert code == 0
    assert "| E[3,3] |" in text and "oracle E = " in text


def test_solve_explicit_grid():
    code, text = run("solve", "--potential=-1/r", "--state", "1s", "--oracle", "--r-max", "40",
                     "--points", "4000", "--format", "json")
    assert code == 0
    assert json.loads(text)["oracle"]["points"] == 4000


@pytest.mark.parametrize("argv", [
    ("solve", "--potential", "-1/(x+1)", "--state", "1s"),
    ("solve", "--alpha", "10"),
    ("solve", "--alpha", "10", "--potential", "-1/r", "--state", "1s"),
    ("solve", "--alpha", "10", "--state", "1p"),
    ("solve", "--alpha", "10", "--state", "1s", "--order", "2"),
    ("solve", "--alpha", "10", "--state", "1s", "--prec-bits", "40"),
    ("solve", "--alpha", "10", "--state", "1s", "--r-max", "40"),
    ("reproduce", "3"),
    ("bogus",),
])
def test_usage_errors(argv, capsys):
    assert run(*argv)[0] == 2


def test_numeric_error_exit_code(capsys):
    code, _ = run("solve", "--potential", "1/r", "--state", "1s")
    assert code == 3
    assert "NoBinding" in capsys.readouterr().err


def test_reproduce_table2_csv():
    code, text = run("reproduce", "2", "--format", "csv", "--jobs", "1")
    assert code == 0
    rows = list(csv.reader(io.StringIO(text)))
    assert rows[0] == ["-E_M", "l = 1", "l = 3", "l = 5", "l = 15"]
    assert rows[1] == ["-E0", "0.00283", "0.002198", "0.0017446", "0.00071089"]
    assert rows[-1][0] == "-E20" and rows[-1][-1] == "0.00070615"


def test_reproduce_table1_markdown():
    code, text = run("reproduce", "1", "--jobs", "1")
    assert code == 0
    assert "| 4s | -0.011638 | E12 | -0.011638 | E[3,3] |" in text
    assert text.count("\n") == 7


def test_reproduce_precision_independent():
    a = run("reproduce", "2", "--prec-bits", "128", "--jobs", "1")[1]
    b = run("reproduce", "2", "--prec-bits", "256", "--jobs", "1")[1]
    assert a == b


def test_diverge_demo():
    code, text = run("diverge-demo", "--format", "json")
    assert code == 0
    rec = json.loads(text)
    assert rec["diagnostics"]["diverging"] is True
    assert rec["diagnostics"]["opt_trunc"] < 20
    assert float(rec["oracle"]["richardson_error"]) <= 1e-7


def test_diverge_demo_markdown_short_order():
    code, text = run("diverge-demo", "--order", "6")
    assert code == 0
    assert text.startswith("V(r) = -1/(r+0.1), l = nr = 0, 6 orders")


@pytest.mark.parametrize("fmt", ["json", "csv", "md"])
def test_oracle_command(fmt):
    code, text = run("oracle", "--potential", "-1/r", "--state", "3s", "--format", fmt)
    assert code == 0
    if fmt == "json":
        assert float(json.loads(text)["energy"]) == pytest.approx(-1 / 18, abs=1e-7)
    else:
        assert "-0.05555555" in text


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "pslet", "oracle", "--alpha", "10", "--state", "1s",
                           "--format", "json"], capture_output=True, text=True, timeout=120)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["nodes"] == 0
