import json
import subprocess
import sys

import pytest

from eqmirror.cli import parse_series, run
from eqmirror.localize import RefinedGF, refined_gf
from eqmirror.mirrormap import GWPotential, closed_form


def call(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, out.strip(), err.strip()


def test_closed_form_text(capsys):
    assert call(capsys, "closed-form", "--kind", "xi1", "--order", "3") == (0, "x - 7/4 x^2 + 55/9 x^3", "")


def test_localize_text(capsys):
    code, out, _ = call(capsys, "localize", "--dmax", "1")
    assert code == 0 and out == "(x1 + x2 + x3) w"


def test_localize_specialized(capsys):
    code, out, _ = call(capsys, "localize", "--dmax", "2", "--specialize", "x1=1,x2=1,x3=0")
    assert code == 0 and out == "2 w - 11/4 w^2"


def test_compare_exit_codes(capsys):
    assert call(capsys, "compare", "x - 7/4 x^2", "x - 7/4 x^2")[0] == 0
    assert call(capsys, "compare", "closed:xi1", "closed:wk:2", "--order", "3")[0] == 1
    code, out, _ = call(capsys, "compare", "closed:wnu:1,2", "closed:xi2", "--mode", "up_to_scalar", "--order", "4")
    assert code == 0 and "scalar 1/2" in out


def test_pf_check(capsys):
    assert call(capsys, "pf-check", "xi1", "--operator", "D1", "--order", "3")[0] == 0
    assert call(capsys, "pf-check", "twist2", "--order", "2")[0] == 0
    assert call(capsys, "pf-check", "xi1", "--operator", "D2", "--order", "2")[0] == 1


def test_jfunc(capsys):
    code, out, _ = call(capsys, "jfunc", "xi1", "--bind", "nu=1", "--order", "2")
    assert code == 0
    assert "t0 = -2*q + 17*q^2" in out and "t = log(q) - 8*q + 74*q^2" in out


def test_potential_interpolated(capsys):
    code, out, _ = call(capsys, "potential", "xi1", "--bind", "nu=1", "--order", "2", "--interpolate", "w", "--restrict", "0")
    assert code == 0 and out.splitlines()[0] == "W = x + (-2*w - 7/4) x^2"


def test_birkhoff_with_basis(capsys):
    code, out, _ = call(capsys, "birkhoff", "xi2", "--bind", "nu=1", "--order", "1", "--basis", "p=0;d/dp p=0")
    assert code == 0 and out


def test_euler_equiv(capsys):
    a = "1 1 -3;0 0 -nu;p^2"
    assert call(capsys, "euler-equiv", a, "1 1 -2 -1;0 0 -nu -nu;p^2")[0] == 0
    assert call(capsys, "euler-equiv", a, "1 1 -2 -2;0 0 -nu -nu;p^2")[0] == 1
    assert call(capsys, "euler-equiv", "--strict", a, "1 1 -1 -1 -1;0 0 -nu -nu -nu;p^2")[0] == 1


def test_admissible(capsys):
    assert call(capsys, "admissible", "--weights", "1,omega,omega^2")[0] == 0
    assert call(capsys, "admissible", "--weights", "1,2,3")[0] == 1


def test_spec_file(tmp_path, capsys):
    path = tmp_path / "xi1.spec"
    path.write_text("name: Xi1\n1 1 1 -3\n0 0 1 -1\np^2\n")
    code, out, _ = call(capsys, "potential", str(path), "--order", "3")
    assert code == 0 and out.splitlines()[0] == "W = x - 7/4 x^2 + 55/9 x^3"


@pytest.mark.parametrize(
    "argv, field",
    [
        (["ifunc", "1 1 x;0 0 0;p^2"], "charges"),
        (["ifunc", "1 1 -2;0 0 0;p^2+1"], "relation"),
        (["ifunc", "1 1 -2;0 0 0"], "relation"),
        (["ifunc", "xi1", "--bind", "mu=1"], "bind"),
    ],
)
def test_malformed_spec_names_field(capsys, argv, field):
    code, _, err = call(capsys, *argv)
    assert code == 2 and err.startswith(f"error: {field}:")


def test_usage_errors(capsys):
    assert call(capsys, "no-such-command")[0] == 2
    assert call(capsys, "closed-form", "--kind", "xi1", "--order", "0")[0] == 2
    assert call(capsys, "localize", "--weights", "1,2")[0] == 2
    assert call(capsys, "closed-form", "--kind", "wk")[0] == 2


def test_json_potential_round_trip(capsys):
    code, out, _ = call(capsys, "--format", "json", "potential", "xi1", "--bind", "nu=1", "--order", "3")
    doc = json.loads(out)
    assert code == 0 and doc["command"] == "potential" and doc["orders"] == {"q": 3}
    pot = GWPotential.from_dict(doc["result"]["potential"])
    assert pot.series == closed_form("xi1", 3).series
    assert pot.factorizes and str(pot.prefactor) == "-1 - 4*p"


def test_json_closed_form_round_trip(capsys):
    _, out, _ = call(capsys, "--format", "json", "closed-form", "--kind", "wnu", "--nu1", "mu", "--nu2", "nu", "--order", "3")
    pot = GWPotential.from_dict(json.loads(out)["result"]["potential"])
    from eqmirror.scalars import params

    mu, nu = params("mu nu")
    assert pot.series == closed_form("wnu", 3, nu1=mu, nu2=nu).series


def test_json_localize_round_trip(capsys):
    _, out, _ = call(capsys, "--format", "json", "localize", "--dmax", "3")
    doc = json.loads(out)
    assert RefinedGF.from_dict(doc["result"]).terms == refined_gf(3).terms


def test_verify_all_subset(capsys):
    code, out, _ = call(capsys, "verify-all", "--only", "1,7")
    assert code == 0
    assert out.splitlines() == [
        "[PASS] criterion 1: Xi1 pipeline at nu=1 gives the printed W through x^6",
        "[PASS] criterion 7: Euler-class equivalences mod p^2",
    ]


def test_verify_all_json_is_deterministic(capsys):
    first = call(capsys, "--format", "json", "verify-all", "--only", "7")[1]
    second = call(capsys, "--format", "json", "verify-all", "--only", "7")[1]
    assert first == second and json.loads(first)["result"]["criteria"][0]["passed"]


def test_parse_series():
    s = parse_series("x - 7/4 x^2 + 55/9*x^3 + O(x^4)")
    assert s == closed_form("xi1", 3).series


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "eqmirror", "closed-form", "--kind", "xi2", "--order", "2"],
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == 0 and proc.stdout.strip() == "2 x - 11/2 x^2"
