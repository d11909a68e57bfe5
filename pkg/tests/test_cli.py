import io
import json

import pytest

from delta_kernel.cli import main, validate_report
from delta_kernel.diffring import DiffContext
from delta_kernel.parser import (
    ParseError,
    parse_diff_expression,
    parse_system,
)
from delta_kernel.printer import print_diffpoly

from conftest import random_diffpoly

PROBLEM = """\
m=2 n=1 coeffs=Q
poly f1 = d1^2*u1 - u1
poly f2 = d2^2*u1 - u1
poly g  = d1*d2*u1 + u1^2
set L = f1, f2

dspec rot {
  n = 2
  m = 1
  d1 x1 = -x2
  d1 x2 = x1
}

dspec shear {
  n = 2
  m = 1
  d1 x1 = 1
  d1 x2 = x2
}

ode P = y + x^2
ode Q = y - x
"""


@pytest.fixture
def problem_path(tmp_path):
    path = tmp_path / "problem.dk"
    path.write_text(PROBLEM, encoding="utf-8")
    return str(path)


def run(argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(argv, stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


class TestParsing:
    def test_header_and_names(self):
        prob = parse_system(PROBLEM)
        assert prob.ctx.m == 2 and prob.ctx.n == 1
        assert prob.names() == ["f1", "f2", "g", "L", "rot", "shear", "P", "Q"]

    def test_direct_construction_example(self):
        ctx = DiffContext(1, 1)
        f = parse_diff_expression("d1^2*u1 - u1", ctx)
        assert f == ctx.d(1, ctx.u(), 2) - ctx.u()

    def test_derivation_index_error_position(self):
        ctx = DiffContext(2, 1)
        with pytest.raises(ParseError) as err:
            parse_diff_expression("d3*u1", ctx)
        assert "derivation index 3 exceeds m=2" in err.value.message
        assert err.value.col == 1

    def test_malformed_exponent(self):
        ctx = DiffContext(1, 1)
        with pytest.raises(ParseError):
            parse_diff_expression("d1^*u1", ctx)

    def test_print_parse_fixed_point(self):
        ctx = DiffContext(1, 1)
        f = parse_diff_expression("(d1*u1)^2 - u1", ctx)
        assert print_diffpoly(f) == "(d1*u1)^2 - u1"

    def test_round_trip_random(self, rng):
        for _ in range(120):
            m = rng.randint(1, 3)
            n = rng.randint(1, 2)
            ctx = DiffContext(m, n)
            f = random_diffpoly(rng, ctx)
            text = print_diffpoly(f)
            assert parse_diff_expression(text, ctx) == f

    def test_duplicate_names_rejected(self):
        bad = "m=1 n=1 coeffs=Q\npoly a = u1\npoly a = u1 + 1\n"
        with pytest.raises(ParseError):
            parse_system(bad)

    def test_unknown_set_member(self):
        bad = "m=1 n=1 coeffs=Q\nset L = nope\n"
        with pytest.raises(ParseError):
            parse_system(bad)


class TestCommands:
    def test_bound_example(self, problem_path):
        code, out, err = run(["--json", "bound", problem_path, "--set", "L"])
        assert code == 0, err
        doc = json.loads(out)
        validate_report(doc)
        assert doc["results"]["l"] == 2
        assert doc["results"]["l1"] == 2
        assert doc["results"]["l2"] == 2
        assert doc["results"]["removable"] == [[1, 1, 1]]
        assert any("characteristic set" in a for a in doc["assumptions"])

    def test_height_example(self):
        code, out, _ = run(["--json", "height", "(t^2+1)/(t-1)"])
        assert code == 0
        doc = json.loads(out)
        assert doc["results"]["height"] == 2

    def test_darboux_example(self, problem_path):
        code, out, _ = run(["--json", "darboux", problem_path, "--dspec", "rot", "--deg", "2"])
        assert code == 0
        doc = json.loads(out)
        assert doc["results"]["count"] == 1
        entry = doc["results"]["results"][0]
        assert entry["polynomial"] == "x1^2 + x2^2"
        assert entry["cofactors"] == ["0"]

    def test_analyze(self, problem_path):
        code, out, _ = run(["--json", "analyze", problem_path])
        doc = json.loads(out)
        assert code == 0
        leaders = {p["name"]: p.get("leader") for p in doc["results"]["polynomials"]}
        assert leaders["f1"] == "d1^2*u1"
        sets = {s["name"]: s["autoreduced"] for s in doc["results"]["sets"]}
        assert sets["L"] is True

    def test_dimfn_cross_check(self, problem_path):
        code, out, _ = run(["--json", "dimfn", problem_path, "--set", "L", "--max-t", "4"])
        doc = json.loads(out)
        assert code == 0
        assert [row["count"] for row in doc["results"]["table"]] == [1, 3, 4, 4, 4]
        assert doc["results"]["oracle_agrees"] is True

    def test_prolong(self, problem_path):
        code, out, _ = run(["--json", "prolong", problem_path, "--set", "L", "--t", "3"])
        doc = json.loads(out)
        assert code == 0
        assert doc["results"]["saturated_dimension"] == 4

    def test_extract(self, problem_path):
        code, out, _ = run(["--json", "extract-dvariety", problem_path, "--set", "L"])
        doc = json.loads(out)
        assert code == 0
        assert doc["results"]["level"] == 2
        assert doc["results"]["fiber_dimension"] == 0

    def test_integrals(self, problem_path):
        code, out, _ = run(["--json", "integrals", problem_path, "--dspec", "shear", "--deg", "3"])
        doc = json.loads(out)
        assert code == 0
        assert doc["results"]["count"] == 0

    def test_reduce_with_certificate(self, problem_path):
        code, out, _ = run(["--json", "reduce", problem_path, "d1^4*u1", "--modulo", "L"])
        doc = json.loads(out)
        assert code == 0
        assert doc["results"]["remainder"] == "u1"
        assert doc["results"]["certificate"]["verified"] is True

    def test_solve_ode(self, problem_path):
        code, out, _ = run(["--json", "solve-ode", problem_path, "--ode", "Q", "--deg", "2"])
        doc = json.loads(out)
        assert code == 0
        assert doc["results"]["observed_bound"] == 0
        assert [s["x"] for s in doc["results"]["solutions"]] == ["0"]

    def test_wedge_check(self):
        code, out, _ = run(["--json", "wedge-check", "--count", "20", "--seed", "7"])
        doc = json.loads(out)
        assert code == 0
        assert doc["results"]["statuses"]["refuted"] == 0
        total = sum(doc["results"]["statuses"].values())
        assert total == 20

    def test_analyze_covers_dspecs_and_odes(self, problem_path):
        code, out, _ = run(["--json", "analyze", problem_path, "--name", "rot"])
        doc = json.loads(out)
        assert code == 0
        assert doc["results"]["dspecs"][0]["commuting"] is True

    def test_experimental_partial_ode(self, tmp_path):
        path = tmp_path / "partial.dk"
        path.write_text(
            "m=1 n=1 coeffs=Q(t1..t2)\node E = y1 - y2\n",
            encoding="utf-8",
        )
        code, out, _ = run(["--json", "solve-ode", str(path), "--ode", "E", "--deg", "1"])
        doc = json.loads(out)
        assert code == 0
        assert doc["results"]["experimental"] is True
        assert "t1 + t2" in {s["x"] for s in doc["results"]["solutions"]}

    def test_darboux_nonlinear_warning_surface(self, tmp_path):
        path = tmp_path / "quad.dk"
        path.write_text(
            "m=1 n=1 coeffs=Q\ndspec q {\n n = 1\n m = 1\n d1 x1 = x1^2\n}\n",
            encoding="utf-8",
        )
        code, out, _ = run(["--json", "darboux", str(path), "--dspec", "q", "--deg", "2"])
        doc = json.loads(out)
        assert code == 0
        polys = {r["polynomial"] for r in doc["results"]["results"]}
        assert "x1" in polys


class TestExitCodes:
    def test_usage_error(self):
        code, _, err = run(["no-such-command"])
        assert code == 1 and "usage error" in err

    def test_missing_command(self):
        code, _, err = run([])
        assert code == 1

    def test_parse_error(self, tmp_path):
        path = tmp_path / "bad.dk"
        path.write_text("m=1 n=1 coeffs=Q\npoly f = d9*u1\n", encoding="utf-8")
        code, _, err = run(["analyze", str(path)])
        assert code == 2 and "parse error" in err

    def test_math_precondition_error(self, tmp_path):
        path = tmp_path / "notauto.dk"
        path.write_text(
            "m=1 n=1 coeffs=Q\npoly a = d1*u1 - u1\npoly b = d1^2*u1\nset L = a, b\n",
            encoding="utf-8",
        )
        code, _, err = run(["bound", str(path), "--set", "L"])
        assert code == 3 and "error" in err

    def test_missing_file(self):
        code, _, err = run(["analyze", "/nonexistent/path.dk"])
        assert code == 1


class TestDeterminism:
    def test_byte_identical_runs(self, problem_path):
        for argv in (
            ["--json", "bound", problem_path, "--set", "L"],
            ["--json", "darboux", problem_path, "--dspec", "rot", "--deg", "2"],
            ["--json", "wedge-check", "--seed", "11", "--count", "15"],
            ["--json", "solve-ode", problem_path, "--ode", "P", "--deg", "1"],
        ):
            code1, out1, _ = run(argv)
            code2, out2, _ = run(argv)
            assert code1 == code2 == 0
            assert out1 == out2

    def test_all_reports_validate(self, problem_path):
        for argv in (
            ["--json", "analyze", problem_path],
            ["--json", "bound", problem_path, "--set", "L"],
            ["--json", "dimfn", problem_path, "--set", "L", "--max-t", "3"],
            ["--json", "height", "1/(t-3)"],
            ["--json", "wedge-check", "--count", "5"],
        ):
            code, out, _ = run(argv)
            assert code == 0
            validate_report(json.loads(out))
