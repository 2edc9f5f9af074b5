import csv
import io
import json
import subprocess
import sys
from fractions import Fraction

import pytest

from geostab.cli import EXIT_DATA, EXIT_USAGE, run

import oracles


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


@pytest.fixture
def p2file(surfaces_dir):
    return str(surfaces_dir / "p2.json")


@pytest.fixture
def quadfile(surfaces_dir):
    return str(surfaces_dir / "quadric.toml")


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_validate(p2file):
    code, out, _ = call("validate", p2file)
    assert code == 0
    assert "rank        1" in out and "(1,0)" in out and "positive_cone" in out


def test_validate_bad_file(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"rank": 2, "gram": [[1, 0], [0, 1]], "ample": {"mode": "positive_cone", "reference": [1, 0]}}))
    code, _, err = call("validate", str(bad))
    assert code == EXIT_DATA and "WrongSignature" in err and "(2,0)" in err
    code, _, _ = call("validate", str(tmp_path / "missing.json"))
    assert code == EXIT_DATA


def test_phi_integer_slope(p2file):
    code, out, _ = call("phi", "--surface", p2file, "--H", "1", "--D", "0", "--beta", "2", "--box", "5")
    assert code == 0
    assert "upper      2" in out and "pointwise  2" in out and "(1,(2),2)" in out


def test_phi_csv(p2file):
    code, out, _ = call("phi", "--surface", p2file, "--H", "1", "--D", "0", "--beta", "0", "--grid", "1,1/2,1/4", "--csv")
    assert code == 0
    assert out.splitlines()[0] == "delta,punctured_sup,witness_r,witness_c1,witness_ch2"
    assert [r["punctured_sup"] for r in rows(out)] == ["1/2", "-inf", "-inf"]
    assert "\r" not in out


def test_slice(p2file):
    code, out, _ = call("slice", "--surface", p2file, "--H", "1", "--D", "0", "--beta", "-2..2", "--step", "1/4", "--box", "6")
    assert code == 0
    table = rows(out)
    assert len(table) == 17
    for r in table:
        b = Fraction(r["beta"])
        assert Fraction(r["phi_upper"]) == b * b / 2
    assert table[0]["phi_pointwise"] == "2" and table[0]["witness_c1"] == "-2"


def test_csv_byte_stable(p2file, quadfile):
    args = [
        ("slice", "--surface", quadfile, "--H", "1,2", "--D", "1,0", "--beta", "-1..1", "--step", "1/3", "--box", "4"),
        ("phi", "--surface", p2file, "--H", "1", "--D", "1/2", "--beta", "3/2", "--csv"),
        ("contract", "--surface", quadfile, "--point", "1/2,0;1,2;0,1;1;7", "--steps", "3", "--csv"),
    ]
    for a in args:
        assert call(*a) == call(*a)


@pytest.mark.parametrize(
    "point, code",
    [("0,0;1;0;0;1/2", 0), ("0,0;1;0;0;-1", 1), ("0,0;1;0;0;0", 1), ("0,0;1;0;1/2;1/16", 2), ("0,0;1;0;3/2;3/4", 1)],
)
def test_member_exit_codes(p2file, point, code):
    assert call("member", "--surface", p2file, "--point", point)[0] == code


def test_member_certificates_reverify(p2file):
    # recheck each printed verdict with the independent oracle, from the CSV alone
    gram = [[1]]
    for alpha in ("-3", "0", "1/3", "1/2", "9/8", "2", "3"):
        for beta in ("-1", "0", "1/2", "3/2", "1"):
            point = f"0,0;1;1/2;{beta};{alpha}"
            code, out, _ = call("member", "--surface", p2file, "--point", point, "--csv")
            (r,) = rows(out)
            a, b = Fraction(alpha), Fraction(beta)
            up = oracles.upper(gram, (1,), (Fraction(1, 2),), b)
            assert Fraction(r["upper"]) == up
            if r["verdict"] == "Inside":
                assert code == 0 and a > up
            elif r["verdict"] == "Outside":
                v = (int(r["witness_r"]), (Fraction(r["witness_c1"]),), Fraction(r["witness_ch2"]))
                assert code == 1
                assert oracles.normalized_slope(gram, (1,), v) == b
                assert oracles.value(gram, (1,), (Fraction(1, 2),), v) == Fraction(r["pointwise"]) >= a
                assert v[1][0] ** 2 - 2 * v[0] * v[2] >= 0
            else:
                assert code == 2 and a <= up
                if r["pointwise"] != "-inf":
                    assert Fraction(r["pointwise"]) < a


def test_charge(p2file):
    code, out, _ = call("charge", "--surface", p2file, "--point", "0,0;1;0;0;1", "--v", "0;0;1")
    assert code == 0 and "Z0       -1+0i" in out and "(exact)" in out
    code, out, _ = call("--precision", "2^-20", "charge", "--surface", p2file, "--point", "1/3,0;1;0;0;1", "--v", "0;0;1", "--csv")
    (r,) = rows(out)
    assert Fraction(r["re_lo"]) <= Fraction(-1, 2) <= Fraction(r["re_hi"])
    assert Fraction(r["re_hi"]) - Fraction(r["re_lo"]) <= Fraction(2, 2**20)
    im = -(3**0.5) / 2
    assert float(Fraction(r["im_lo"])) <= im <= float(Fraction(r["im_hi"]))


def test_contract(quadfile):
    code, out, _ = call("contract", "--surface", quadfile, "--point", "0,0;1,2;0,0;1/3;5", "--steps", "4")
    assert code == 0 and "violations  0" in out
    code, out, _ = call("contract", "--surface", quadfile, "--point", "0,0;1,2;0,0;1/3;5", "--steps", "4", "--csv")
    table = rows(out)
    assert len(table) == 12 and table[-1]["alpha"] == "1" and table[-1]["H"] == "1;1"
    assert all(Fraction(r["margin"]) > 0 for r in table)


def test_contract_uncertified(p2file):
    code, _, err = call("contract", "--surface", p2file, "--point", "0,0;1;0;1/2;0", "--steps", "2")
    assert code == EXIT_DATA and "NotInside" in err
    code, _, _ = call("contract", "--surface", p2file, "--point", "0,0;1;0;1/2;0", "--steps", "2", "--allow-uncertified")
    assert code == 0


def test_pinch_demo():
    code, out, _ = call("pinch-demo", "--grid", "-2,2,-3,3", "--spacing", "0.05")
    assert code == 0 and "components  2" in out
    assert "(z=-1, alpha=2) lies in component 0" in out and "(z=1, alpha=2) lies in component 1" in out


def test_negative_values_are_not_flags(p2file):
    code, out, _ = call("phi", "--surface", p2file, "--H", "1", "--D", "-1", "--beta", "-3/2")
    assert code == 0 and "upper" in out


@pytest.mark.parametrize(
    "argv",
    [
        (),
        ("bogus",),
        ("phi", "--surface", "x.json"),
        ("phi", "--surface", "p2", "--H", "1", "--D", "0", "--beta", "one"),
        ("--precision", "0", "pinch-demo"),
        ("member", "--surface", "p2", "--point", "0;1;0"),
        ("pinch-demo", "--grid", "1,2,3"),
    ],
)
def test_usage_errors(argv):
    assert call(*argv)[0] == EXIT_USAGE


def test_data_errors(p2file):
    assert call("phi", "--surface", p2file, "--H", "0", "--D", "0", "--beta", "0")[0] == EXIT_DATA
    assert call("phi", "--surface", p2file, "--H", "1,1", "--D", "0", "--beta", "0")[0] == EXIT_DATA


def test_module_entry_point(p2file):
    proc = subprocess.run([sys.executable, "-m", "geostab", "validate", p2file], capture_output=True, text=True)
    assert proc.returncode == 0 and "signature" in proc.stdout
