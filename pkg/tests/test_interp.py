import itertools

import pytest

from unifint.errors import InputError, ResidualMissing
from unifint.finalg import FiniteAlgebra
from unifint.interp import (
    InterpolantResult,
    NoLeftInterpolant,
    VarietyEngine,
    dip_square_check,
    entails,
    fresh_names,
    left_uniform_interpolant,
    maehara_residual_interpolant,
    right_uniform_interpolant,
    term_function,
    verify_left,
    verify_right,
    verify_uniform_interpolant,
)
from unifint.terms import EquationSet, Signature, parse_equation_set, parse_term

from oracles import BOOL_OPS, term_truth_table


def eqs(V, text):
    return parse_equation_set(text, V.sig)


def semantic_consequences(eqset, vars, candidates):
    """Candidate equations over a sub-list of ``vars`` that hold wherever ``eqset`` does, by truth tables."""
    sat = [
        i
        for i, _ in enumerate(itertools.product((0, 1), repeat=len(vars)))
        if all(
            term_truth_table(e.lhs, BOOL_OPS, vars)[i] == term_truth_table(e.rhs, BOOL_OPS, vars)[i] for e in eqset
        )
    ]
    out = set()
    for s, t in candidates:
        ts, tt = term_truth_table(s, BOOL_OPS, vars), term_truth_table(t, BOOL_OPS, vars)
        if all(ts[i] == tt[i] for i in sat):
            out.add((str(s), str(t)))
    return out


def test_right_example_negation(BA):
    sigma = eqs(BA, "vars: x, y1, y2\ny1 = x\ny2 = neg(x)\n")
    res = right_uniform_interpolant(BA, sigma, ["x"])
    assert res.pi.vars == ("y1", "y2")
    assert entails(BA, res.pi, eqs(BA, "vars: y1, y2\ny2 = neg(y1)\n"))
    assert entails(BA, eqs(BA, "vars: y1, y2\ny2 = neg(y1)\n"), res.pi)
    # truth-table oracle on all equations over F(y1, y2)
    F = BA.free(["y1", "y2"])
    cands = [(F.witnesses[a], F.witnesses[b]) for a, b in itertools.combinations(range(F.size), 2)]
    big = ("x", "y1", "y2")
    assert semantic_consequences(sigma, big, cands) == semantic_consequences(res.pi, big, cands)


def test_right_example_meet_is_trivial(BA):
    sigma = eqs(BA, "vars: x, y1, y2\nx = meet(y1, y2)\n")
    res = right_uniform_interpolant(BA, sigma, ["x"])
    assert len(res.pi) == 0


def test_right_empty(BDL):
    res = right_uniform_interpolant(BDL, eqs(BDL, "vars: x, y\n"), ["x"])
    assert len(res.pi) == 0 and res.pi.vars == ("y",)


@pytest.mark.parametrize("method", ["free", "semantic"])
def test_verify_right_methods(BA, method):
    sigma = eqs(BA, "vars: x, y1\nmeet(x, y1) = top\n")
    res = right_uniform_interpolant(BA, sigma, ["x"])
    v = verify_right(BA, sigma, res, fresh=1, method=method)
    assert v.passed and v.checked > 0


def test_verify_right_catches_wrong_pi(BA):
    sigma = eqs(BA, "vars: x, y1, y2\ny1 = x\ny2 = neg(x)\n")
    wrong = InterpolantResult(EquationSet((), ("y1", "y2")), ("x",), "right")
    v = verify_right(BA, sigma, wrong, fresh=0)
    assert not v and v.witness["entailedBy"] == "Sigma"
    assert not verify_right(BA, sigma, wrong, fresh=0, method="semantic")


def test_left_example_trivializes(BA):
    delta = eqs(BA, "vars: y1, z\ny1 = z\n")
    res = left_uniform_interpolant(BA, delta, ["z"])
    assert res
    assert entails(BA, res.pi, eqs(BA, "vars: y1\nbot = top\n"))
    assert verify_left(BA, delta, res, fresh=1, samples=50)
    assert verify_uniform_interpolant(BA, delta, res, fresh=0)


def test_left_nothing_to_eliminate(BDL):
    delta = eqs(BDL, "vars: y1, y2\ny1 = y2\n")
    res = left_uniform_interpolant(BDL, delta, [])
    assert entails(BDL, res.pi, delta) and entails(BDL, delta, res.pi)
    assert len(left_uniform_interpolant(BDL, eqs(BDL, "vars: y1, z\n"), ["z"]).pi) == 0


def test_verify_left_catches_wrong_pi(BA):
    delta = eqs(BA, "vars: y1, z\ny1 = z\n")
    wrong = InterpolantResult(EquationSet((), ("y1",)), ("z",), "left")
    assert not verify_left(BA, delta, wrong, fresh=0, samples=0)


def test_no_left_interpolant_is_falsy():
    d = NoLeftInterpolant(EquationSet((), ()), ("z",), EquationSet((), ()))
    assert not d and d.to_json()["exists"] is False


def test_maehara_example(BA):
    sigma = eqs(BA, "vars: x\nx = bot\n")
    delta = eqs(BA, "vars: x\nbot = top\n")
    for ideal in (False, True):
        res = maehara_residual_interpolant(BA, sigma, delta, use_ideal=ideal)
        assert res.verified
        assert entails(BA, res.pi, eqs(BA, "vars: x\nx = top\n"))
        assert entails(BA, eqs(BA, "vars: x\nx = top\n"), res.pi)


def test_maehara_trivial_cases(BDL):
    delta = eqs(BDL, "vars: x, y\nx = y\n")
    same = maehara_residual_interpolant(BDL, delta, delta)
    assert len(same.pi) == 0
    empty = maehara_residual_interpolant(BDL, eqs(BDL, "vars: x, y\n"), delta)
    assert entails(BDL, empty.pi, delta) and entails(BDL, delta, empty.pi)


def test_maehara_missing_residual():
    # three distinct constants: F(no variables) has three elements and Con is M3
    sig = Signature("k", (("c", 0), ("d", 0), ("e", 0)))
    V = VarietyEngine(FiniteAlgebra(sig, 3, {"c": [0], "d": [1], "e": [2]}, "three"))
    assert len(V.con([])) == 5
    sigma = parse_equation_set("vars:\nc = d\n", sig)
    delta = parse_equation_set("vars:\nd = e\n", sig)
    with pytest.raises(ResidualMissing) as exc:
        maehara_residual_interpolant(V, sigma, delta)
    assert exc.value.witness is not None


@pytest.mark.parametrize("fixture", ["BA", "BDL"])
def test_dip_square(fixture, request):
    V = request.getfixturevalue(fixture)
    assert dip_square_check(V, ["x"], ["y"], ["z"])


def test_dip_square_rejects_overlap(BA):
    with pytest.raises(InputError):
        dip_square_check(BA, ["x"], ["x"], ["z"])


def test_term_function_order(ba2):
    t = parse_term("meet(x, neg(y))", ba2.sig)
    assert list(term_function(t, ba2, ("x", "y"))) == [0, 0, 1, 0]


def test_fresh_names():
    assert fresh_names(2, ["z0", "y"]) == ("z1", "z2")


def test_eliminate_duplicates_rejected(BA):
    with pytest.raises(InputError):
        right_uniform_interpolant(BA, eqs(BA, "vars: x, y\n"), ["x", "x"])
