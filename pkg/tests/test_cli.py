import json
from importlib.resources import files

import pytest

from unifint.cli import RunConfig, main, resolve_budget
from unifint.errors import InputError
from unifint.finalg import DEFAULT_BUDGET

DATA = files("unifint") / "data"


def path(name):
    return str(DATA / f"{name}.json")


@pytest.fixture
def run(capsys):
    def _run(*argv):
        code = main(list(argv))
        out = capsys.readouterr()
        return code, out.out, out.err

    return _run


@pytest.fixture
def files_(tmp_path):
    def write(name, text):
        p = tmp_path / name
        p.write_text(text)
        return str(p)

    return write


def test_alg_free_bdl(run):
    code, out, _ = run("alg", "free", "--generator", path("bdl2"), "--vars", "x,y")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "size 6" and len(lines) == 7


def test_interp_right_pass(run, files_):
    s = files_("s.eqs", "vars: x, y1, y2\ny1 = x\ny2 = neg(x)\n")
    code, out, _ = run("interp", "right", "--variety", path("ba2"), "--sigma", s, "--eliminate", "x", "--verify")
    assert code == 0
    assert "PASS" in out and "y1 = neg(y2)" in out


def test_lgroup_eliminate_certificate(run, files_):
    f = files_("sys.ineq", "0 <= y1 + 2*x\n0 <= y2 - 2*x\n")
    code, out, _ = run("lgroup", "eliminate", "--var", "x", "--in", f, "--certify")
    assert code == 0
    assert out.splitlines()[0] == "0 <= y1 + y2"
    assert "certificates: PASS" in out


def test_json_schema_and_flags(run):
    code, out, _ = run("--format", "json", "alg", "cong", "--algebra", path("ba4"))
    doc = json.loads(out)
    assert code == 0
    assert list(doc)[:4] == ["schema", "command", "seed", "exitCode"]
    assert doc["schema"] == "unifint/1"
    assert doc["flags"] == {"distributive": True, "duallyBrouwerian": True}


def test_global_options_after_subcommand(run):
    code, out, _ = run("alg", "cong", "--algebra", path("ba4"), "--format", "json", "--seed", "5")
    assert code == 0 and json.loads(out)["seed"] == 5


def test_cong_pairs_and_dot(run, tmp_path):
    dot = tmp_path / "con.dot"
    code, out, _ = run("alg", "cong", "--algebra", path("ba4"), "--pair", "0,1")
    assert code == 0 and out.startswith("{{0,1},{2,3}}")
    code, _, _ = run("alg", "cong", "--algebra", path("chain3"), "--dot", str(dot))
    assert code == 0 and dot.read_text().startswith("digraph")


def test_property_failure_has_witness(run):
    code, out, _ = run("--format", "json", "alg", "cep", "--algebra", path("m3"))
    doc = json.loads(out)
    assert code == 1 and doc["pass"] is False
    assert doc["witness"]["subuniverse"] == [0, 1, 4]


def test_usage_errors(run, files_):
    assert run("alg", "nope")[0] == 2
    assert run("alg", "free", "--generator", "/no/such/file.json", "--vars", "x")[0] == 2
    bad = files_("bad.eqs", "x = y1\n")
    code, out, err = run("--format", "json", "interp", "right", "--variety", path("ba2"), "--sigma", bad, "--eliminate", "x")
    assert code == 2 and "vars" in err
    assert json.loads(out)["error"]["witness"] is not None


def test_budget_exit(run):
    code, out, _ = run("--budget", "10", "--format", "json", "alg", "free", "--generator", path("ba2"), "--vars", "x,y,z")
    doc = json.loads(out)
    assert code == 3 and doc["error"]["witness"]["budget"] == 10


def test_budget_precedence(monkeypatch):
    monkeypatch.delenv("UNIFINT_BUDGET", raising=False)
    assert resolve_budget(None) == DEFAULT_BUDGET
    monkeypatch.setenv("UNIFINT_BUDGET", "1234")
    assert resolve_budget(None) == 1234
    assert resolve_budget(99) == 99
    monkeypatch.setenv("UNIFINT_BUDGET", "lots")
    with pytest.raises(InputError):
        resolve_budget(None)


def test_env_budget_reaches_commands(run, monkeypatch):
    monkeypatch.setenv("UNIFINT_BUDGET", "10")
    assert run("alg", "free", "--generator", path("ba2"), "--vars", "x,y,z")[0] == 3


def test_run_config_rejects_nonpositive():
    with pytest.raises(InputError):
        RunConfig(budget=0, limit=1, seed=0, format="text", verbosity=0)


def test_alg_validate(run):
    code, out, _ = run("alg", "validate", "--algebra", path("slat2"))
    assert code == 0 and "valid" in out


def test_interp_left_and_maehara(run, files_):
    d = files_("d.eqs", "vars: y1, z\ny1 = z\n")
    code, out, _ = run("interp", "left", "--variety", path("ba2"), "--delta", d, "--eliminate", "z", "--verify")
    assert code == 0 and "PASS" in out
    s = files_("s.eqs", "vars: x\nx = bot\n")
    t = files_("t.eqs", "vars: x\nbot = top\n")
    code, out, _ = run("interp", "maehara", "--variety", path("ba2"), "--sigma", s, "--delta", t)
    assert code == 0 and "PASS" in out


def test_interp_dip(run):
    code, out, _ = run("interp", "dip-check", "--variety", path("bdl2"), "--x", "x", "--y", "y", "--z", "z")
    assert code == 0 and "PASS" in out


def test_mc_axiom(run, files_):
    g = files_("g.eqs", "vars: x, y1\nx = y1\n")
    d = files_("d.eqs", "vars: x, y2\nx = y2\n")
    code, out, _ = run("mc", "axiom", "--variety", path("ba2"), "--gamma", g, "--delta", d, "--eliminate", "x", "--verify")
    assert code == 0
    assert out.splitlines()[0] == "(~ (y1 = y2)) -> exists x . ((x = y1) & ~ (x = y2))"
    assert "quantifier elimination direction: PASS" in out


def test_lgroup_check_fuzz_echoes_seed(run):
    code, out, _ = run("--format", "json", "--seed", "42", "lgroup", "check", "--systems", "20", "--points", "20")
    doc = json.loads(out)
    assert code == 0 and doc["seed"] == 42 and doc["pass"] is True


def test_lgroup_check_point(run, files_):
    f = files_("sys.ineq", "0 <= y1 + 2*x\n0 <= y2 - 2*x\n")
    code, out, _ = run("lgroup", "check", "--in", f, "--var", "x", "--point", "y1=4,y2=-5")
    assert code == 0 and "empty" in out
