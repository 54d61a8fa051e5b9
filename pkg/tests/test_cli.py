import csv
import io
import json
from fractions import Fraction

import pytest

from crossprob import cli


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_series_fW_exact(capsys):
    code, out, _ = run(capsys, "series", "fW", "--order", "6")
    assert code == 0
    doc = json.loads(out)
    nonzero = [Fraction(c) for c in doc["coeffs"] if Fraction(c) != 0]
    assert nonzero == [Fraction(1, 5), Fraction(16, 55), Fraction(364, 935), Fraction(13568, 21505), Fraction(91614, 124729)]


@pytest.mark.parametrize("kind,expected", [("lambda", [16, -128, 704]), ("lambda_prime", [8, -128, 1056])])
def test_series_lambda(capsys, kind, expected):
    code, out, _ = run(capsys, "series", kind)
    assert code == 0
    assert [Fraction(c) for c in json.loads(out)["coeffs"][:3]] == expected


def test_series_csv(capsys):
    code, out, _ = run(capsys, "--format", "csv", "series", "theta3", "--order", "10")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert [int(r["numerator"]) for r in rows] == [1, 2, 0, 0, 2, 0, 0, 0, 0, 2]
    assert out.endswith("\r\n")


def test_series_h_needs_gamma(capsys):
    assert run(capsys, "series", "h")[0] == 2
    code, out, _ = run(capsys, "series", "h", "--gamma", "1/3", "--order", "5")
    assert code == 0 and json.loads(out)["leading"] == "1/3"


def test_crossing_json(capsys):
    code, out, _ = run(capsys, "crossing", "pih", "--r", "1", "--method", "all")
    assert code == 0
    rows = json.loads(out)
    assert len(rows) == 3
    assert all(abs(row["value"] - 0.5) < 1e-10 for row in rows)


def test_crossing_grid_csv(capsys):
    code, out, _ = run(capsys, "crossing", "pihv", "--r-grid", "0.5:2:4", "--format", "csv")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert [float(r["r"]) for r in rows] == [0.5, 1.0, 1.5, 2.0]
    assert abs(float(rows[0]["value"]) - float(rows[3]["value"])) < 1e-9


def test_crossing_generalized(capsys):
    code, out, _ = run(capsys, "crossing", "piminus", "--r", "2,0.5", "--alpha", "0.25", "--beta", "0.75")
    rows = json.loads(out)
    assert code == 0 and abs(rows[0]["value"] - rows[1]["value"]) < 1e-8


def test_partition(capsys):
    _, a, _ = run(capsys, "crossing", "Z", "--l", "1", "--lp", "2")
    _, b, _ = run(capsys, "crossing", "Z", "--l", "2", "--lp", "1")
    assert json.loads(a)[0]["value"] == pytest.approx(json.loads(b)[0]["value"], rel=1e-12)


def test_sle(capsys):
    code, out, _ = run(capsys, "sle", "--lam", "1", "--kappa", "4.5")
    assert code == 0 and abs(json.loads(out)[0]["value"] - 1) < 1e-12


def test_mc_deterministic(capsys):
    argv = ("mc", "--L", "16", "--Lp", "16", "--trials", "3000", "--seed", "5")
    _, a, _ = run(capsys, *argv)
    _, b, _ = run(capsys, *argv, "--threads", "2")
    da, db = json.loads(a), json.loads(b)
    assert da == db
    assert da["estimate"]["trials"] == 3000
    assert abs(da["comparison"]["formula"] - 0.5) < 1e-10


def test_mc_null_z(capsys):
    code, out, _ = run(capsys, "mc", "--L", "8", "--Lp", "8", "--p", "0.5", "--trials", "1", "--seed", "1")
    assert code == 0
    json.loads(out)  # valid JSON even when the z-score is undefined


def test_verify_exit_codes(capsys):
    code, out, _ = run(capsys, "verify", "partition")
    assert code == 0 and json.loads(out)["overall"] is True
    code, out, _ = run(capsys, "verify", "partition", "--tol", "0")
    assert code == 1 and json.loads(out)["overall"] is False


def test_usage_errors(capsys):
    assert run(capsys, "crossing", "pih")[0] == 2
    assert run(capsys, "crossing", "pih", "--r", "-1")[0] == 2
    assert run(capsys, "crossing", "pih", "--r-grid", "1:2")[0] == 2
    assert run(capsys, "sle", "--lam", "0.5", "--kappa", "3")[0] == 2
    assert run(capsys, "mc", "--L", "8")[0] == 2
    with pytest.raises(SystemExit) as exc:
        cli.main(["series", "nope"])
    assert exc.value.code == 2


def test_series_h_gamma_zero(capsys):
    code, out, _ = run(capsys, "series", "h", "--gamma", "0", "--order", "1")
    doc = json.loads(out)
    assert code == 0 and Fraction(doc["leading"]) == 0 and doc["coeffs"] == ["1/1"]


def test_crossing_r2_all_methods(capsys):
    _, out, _ = run(capsys, "crossing", "pih", "--r", "2", "--method", "all")
    vals = [row["value"] for row in json.loads(out)]
    assert max(vals) - min(vals) < 1e-8


@pytest.mark.slow
def test_mc_square_self_dual(capsys):
    code, out, _ = run(capsys, "mc", "--L", "64", "--Lp", "64", "--trials", "100000", "--seed", "3")
    assert code == 0 and abs(json.loads(out)["comparison"]["z"]) < 3
