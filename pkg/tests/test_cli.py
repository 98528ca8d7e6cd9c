"""The command line front end: JSON shape, exit codes and parse errors."""

import json
import subprocess
import sys
from fractions import Fraction

import mpmath
import pytest

from cmlvalues import cli, heckechar, hyperfun as hf, suite


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


class TestExpand:
    def test_literal(self, capsys):
        code, out, _ = run(capsys, "expand", "eta(6t)^4", "--order", "20")
        d = json.loads(out)
        assert code == 0 and d["form"] == "eta(6t)^4" and d["trunc"] == 20
        assert d["coeffs"][:2] == [[1, "1/1"], [7, "-4/1"]]

    def test_emit_series_is_bare(self, capsys):
        _, out, _ = run(capsys, "expand", "eta(1t)^0", "--emit-series")
        assert json.loads(out) == {"denom": 1, "trunc": 60, "coeffs": [[0, "1/1"]]}

    def test_named_form(self, capsys):
        _, out, _ = run(capsys, "expand", "h4", "--order", "12", "--text")
        assert out.startswith("h4 = (1)*q^1 + (-8)*q^4")

    def test_parse_error(self, capsys):
        code, _, err = run(capsys, "expand", "eta(")
        assert code == 2 and "offset 4" in err


class TestCoeffs:
    def test_json(self, capsys):
        _, out, _ = run(capsys, "coeffs", "f32", "--N", "10")
        assert json.loads(out) == {"form": "f32", "N": 10, "a": [1, 0, 0, 0, -2, 0, 0, 0, -3, 0]}


class TestLvalue:
    def test_integral(self, capsys):
        _, out, _ = run(capsys, "lvalue", "--form", "f36", "--s", "1", "--route", "integral")
        d = json.loads(out)
        assert set(d) == {"form", "s", "value", "error", "route", "closed_form_match"}
        assert all(isinstance(v, str) for k, v in d.items() if k != "closed_form_match")
        with mpmath.workdps(30):
            ref = hf.beta(Fraction(1, 3), Fraction(1, 3)) / (3 * mpmath.mpf(2) ** (mpmath.mpf(4) / 3))
            assert abs(mpmath.mpf(d["value"]) - ref) / ref < mpmath.mpf("1e-28")

    def test_functional_equation(self, capsys):
        _, out, _ = run(capsys, "lvalue", "--form", "g", "--s", "2", "--route", "functional-equation")
        d = json.loads(out)
        assert d["route"] == "functional-equation"
        assert d["closed_form_match"]["expression"] == "B(1/4,1/4)^2/64"

    def test_eisenstein_power(self, capsys):
        _, out, _ = run(capsys, "lvalue", "--form", "chi", "--s", "3", "--route", "eisenstein", "--k", "6")
        d = json.loads(out)
        assert d["form"] == "chi^6" and d["s"] == "3"
        assert mpmath.mpf(d["closed_form_match"]["residual"]) < mpmath.mpf("1e-25")

    def test_precision_flag(self, capsys):
        _, out, _ = run(capsys, "lvalue", "--form", "f32", "--s", "1", "--route", "integral", "--precision", "50")
        assert len(json.loads(out)["value"].replace(".", "")) >= 50

    def test_bad_point(self, capsys):
        code, _, err = run(capsys, "lvalue", "--form", "g", "--s", "1", "--route", "functional-equation")
        assert code == 2 and "error" in err


class TestOther:
    def test_constants(self, capsys):
        _, out, _ = run(capsys, "constants")
        c = json.loads(out)["constants"]
        assert {"b_K(4)", "b_K(3)", "B(1/4,1/4)", "B(1/3,1/3)"} <= set(c)

    def test_cm_values(self, capsys):
        _, out, _ = run(capsys, "cm-values")
        d = json.loads(out)
        assert d["j_u_tower"][0]["j"] == "54000"

    def test_verify_scope(self, capsys):
        code, out, _ = run(capsys, "verify", "table1")
        d = json.loads(out)
        assert code == 0 and d["ok"]
        assert sum(c["status"] == "PASS" and c["name"].startswith("C_chi") for c in d["checks"]) == 10

    def test_verify_congruences(self, capsys):
        code, out, _ = run(capsys, "verify", "congruences", "--N", "1000", "--text")
        assert code == 0
        assert sum(line.startswith("[PASS] a") and " mod " in line for line in out.splitlines()) == 4

    def test_verify_rejects_unknown_scope(self, capsys):
        with pytest.raises(SystemExit):
            cli.main(["verify", "everything"])

    def test_module_entry_point(self):
        r = subprocess.run([sys.executable, "-m", "cmlvalues", "coeffs", "h3", "--N", "6"],
                           capture_output=True, text=True, check=True)
        assert json.loads(r.stdout)["a"] == heckechar.eta_coefficients("h3", 6)


class TestExitCode:
    def _patch(self, monkeypatch, status):
        def producer(settings):
            yield suite.CheckResult("stub", status)
        monkeypatch.setitem(suite.REGISTRY, "table1", (producer,))

    def test_fail_gives_one(self, capsys, monkeypatch):
        self._patch(monkeypatch, suite.FAIL)
        assert run(capsys, "verify", "table1")[0] == 1

    def test_skip_gives_zero(self, capsys, monkeypatch):
        self._patch(monkeypatch, suite.SKIP)
        assert run(capsys, "verify", "table1")[0] == 0
