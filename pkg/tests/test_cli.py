import json
from pathlib import Path

import pytest

from gradpoisson.cli import COMMANDS, main
from gradpoisson.corpus import CORPUS, ProblemError, load_problem, problem_from_json
from gradpoisson.expr import format_poly, parse

PROBLEMS = Path(__file__).resolve().parent.parent / "problems"


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    return code, capsys.readouterr().out


def field(out, key):
    for line in out.splitlines():
        if line.startswith(key + ": "):
            return line[len(key) + 2:]
    raise KeyError(key)


# -- problem files -----------------------------------------------------------

@pytest.mark.parametrize("name", sorted(CORPUS))
def test_problem_files_match_corpus(name):
    path = PROBLEMS / f"{name}.json"
    assert path.read_text(encoding="utf-8") == CORPUS[name].dumps()
    assert load_problem(str(path)) == CORPUS[name]


@pytest.mark.parametrize("bad,msg", [
    ({"generators": [["x", 0]], "foo": 1}, "unknown keys"),
    ({"generators": []}, "nonempty"),
    ({"generators": [["x", "0"]]}, "bad generator"),
    ({"generators": [["x", 0]], "poisson": [["x", "q", "1"]]}, "unknown generator"),
    ({"generators": [["x", 0]], "constraints": ["y"]}, "not a coordinate"),
    ({"generators": [["x", 0]], "points": [["1", "2"]]}, "wrong dimension"),
    ({"generators": [["x", 0]], "points": [["a"]]}, "rational"),
    ([], "JSON object"),
])
def test_problem_validation(bad, msg):
    with pytest.raises(ProblemError, match=msg):
        problem_from_json(bad)


# -- commands ------------------------------------------------------------------

def test_check_mc(capsys):
    code, out = run(capsys, "check-mc", PROBLEMS / "sl2-origin.json")
    assert code == 0 and field(out, "MC") == "yes"
    code, out = run(capsys, "check-mc", PROBLEMS / "non-jacobi.json")
    assert code == 1 and field(out, "MC") == "no"
    assert field(out, "certificate") == "-2*theta_x2*theta_x3*theta_x4"


def test_header_echoes_defaults(capsys):
    _, out = run(capsys, "check-mc", PROBLEMS / "symplectic-r2.json")
    head = out.splitlines()[:3]
    assert head == ["command: check-mc", "problem: symplectic-r2", "options: arity=3 eps_order=2 max_degree=3"]
    _, out = run(capsys, "classify", PROBLEMS / "symplectic-r2.json", "--point", "3/2,0", "--max-degree", "2")
    assert "point=(3/2, 0)" in out and "max_degree=2" in out


def test_malformed_expression(tmp_path, capsys):
    p = tmp_path / "bad.json"
    p.write_text(json.dumps({"name": "bad", "generators": [["x", 0], ["y", 0]],
                             "poisson": [["x", "y", "x*(y"]]}))
    code, out = run(capsys, "check-mc", p)
    assert code == 2 and "line 1, column 5" in out


def test_invalid_json(tmp_path, capsys):
    p = tmp_path / "bad.json"
    p.write_text('{"name": "bad",\n "generators": [["x", 0],]}')
    code, out = run(capsys, "check-mc", p)
    assert code == 2 and "line 2" in out


@pytest.mark.parametrize("argv", [
    ("bogus", "problems/sl2-origin.json"),
    ("star", PROBLEMS / "sl2-origin.json", "--eps-order", "3"),
    ("lift", PROBLEMS / "sl2-origin.json"),
    ("classify", PROBLEMS / "sl2-origin.json", "--point", "1,2"),
    ("classify", PROBLEMS / "sl2-origin.json", "--point", "0,0,1"),
    ("bfv", PROBLEMS / "sl2-origin.json", "--max-degree", "-1"),
    ("check-mc", "/nonexistent/problem.json"),
])
def test_input_errors_exit_2(capsys, argv):
    code, _ = run(capsys, *argv)
    assert code == 2


def test_classify_sl2_axis(capsys):
    code, out = run(capsys, "classify", PROBLEMS / "sl2-axis.json")
    lines = [l for l in out.splitlines() if l.startswith("point")]
    assert "coisotropic=no" in lines[0] and "coisotropic=yes" in lines[1]


def test_pinfty(capsys):
    code, out = run(capsys, "pinfty", PROBLEMS / "sl2-origin.json")
    assert code == 0 and field(out, "linf_violations") == "0"
    code, out = run(capsys, "pinfty", PROBLEMS / "non-jacobi.json")
    assert code == 1 and field(out, "linf_violations") != "0"


def test_bfv(capsys):
    code, out = run(capsys, "bfv", PROBLEMS / "nonabelian-2d.json")
    assert code == 0
    assert field(out, "omega") == "-b_y1*c_y1*c_y2 + y1*c_y1 + y2*c_y2"
    code, out = run(capsys, "bfv", PROBLEMS / "symplectic-r4-noncoiso.json")
    assert code == 1 and field(out, "certificate") == "c_q2*c_p2"


def test_cohomology(capsys):
    code, out = run(capsys, "cohomology", PROBLEMS / "sl2-origin.json")
    assert code == 0 and field(out, "dims_equal") == "yes"
    assert field(out, "dims_H_D") == "-3:0 -2:0 -1:0 0:1 1:0 2:0 3:1"


def test_lift(capsys):
    code, out = run(capsys, "lift", PROBLEMS / "lift-koszul.json")
    assert code == 0 and "  a_1 = -b*c" in out
    code, out = run(capsys, "lift", PROBLEMS / "lift-obstructed.json")
    assert code == 1 and field(out, "obstruction") == "-c"


def test_star_commands(capsys):
    code, out = run(capsys, "star", PROBLEMS / "symplectic-r2.json")
    assert code == 0 and field(out, "f*g-g*f") == "[eps^1] 2"
    code, out = run(capsys, "star", PROBLEMS / "non-jacobi.json")
    assert code == 1 and field(out, "associator") == "[eps^2] 2/3"
    code, out = run(capsys, "central-lift", PROBLEMS / "sl2-origin.json")
    assert code == 0
    code, out = run(capsys, "quotient", PROBLEMS / "sl2-origin.json")
    assert code == 0 and field(out, "dims_by_degree") == "0:1 1:3 2:5 3:7"
    assert field(out, "table_associative") == "yes"


def test_legendre(capsys):
    code, out = run(capsys, "legendre", PROBLEMS / "sl2-origin.json")
    assert code == 0 and field(out, "double_shift_identity") == "yes"


def test_json_mode(capsys):
    code, out = run(capsys, "bfv", PROBLEMS / "sl2-origin.json", "--json")
    data = json.loads(out)
    assert data["status"] == code == 0
    assert data["result"]["terminated"] == "yes"
    assert data["options"]["max_degree"] == 3


def test_emitted_expressions_reparse(capsys):
    prob = CORPUS["sl2-origin"]
    _, out = run(capsys, "bfv", PROBLEMS / "sl2-origin.json", "--json")
    from gradpoisson.bfv import BfvContext
    ctx = BfvContext.from_pi(prob.pi(), prob.constraints)
    for text in json.loads(out)["result"]["components"]:
        assert format_poly(parse(text, ctx)) == text


@pytest.mark.parametrize("command", COMMANDS)
def test_every_command_runs_on_every_file(command, capsys):
    for path in sorted(PROBLEMS.glob("*.json")):
        code, out = run(capsys, command, path)
        assert code in (0, 1, 2)
        if code != 2:
            assert out.startswith(f"command: {command}\n") and out.endswith(f"status: {code}\n")
