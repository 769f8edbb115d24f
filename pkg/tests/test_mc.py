import itertools

import pytest

from unifint.errors import NotInVariety, PreconditionFailed, UnsupportedCase
from unifint.mc import (
    Conj,
    EqAtom,
    Exists,
    build_axiom_datum,
    emit_axiom,
    format_formula,
    holds,
    in_variety,
    phi,
    verify_cotheory_instance,
    verify_quantelim_direction,
)
from unifint.interp import entails
from unifint.terms import parse_equation_set

from oracles import data


def eqs(V, text):
    return parse_equation_set(text, V.sig)


@pytest.fixture(scope="module")
def excluded(BA):
    return build_axiom_datum(BA, eqs(BA, "vars: x, y1\nx = y1\n"), [eqs(BA, "vars: x, y2\nx = y2\n")], "x")


def test_excluded_datum(BA, excluded):
    d = excluded
    assert d.zs == ("y1", "y2")
    assert len(d.sigma) == 0
    assert entails(BA, d.pis[0], eqs(BA, "vars: y1, y2\ny1 = y2\n"))
    assert entails(BA, eqs(BA, "vars: y1, y2\ny1 = y2\n"), d.pis[0])
    assert emit_axiom(d)[1] == "(~ (y1 = y2)) -> exists x . ((x = y1) & ~ (x = y2))"


def test_solvability_datum(BA):
    d = build_axiom_datum(BA, eqs(BA, "vars: x, y1, y2\nx = meet(y1, y2)\n"), [], "x")
    assert len(d.sigma) == 0
    assert emit_axiom(d)[1] == "true -> exists x . (x = meet(y1, y2))"


def test_vacuous_datum(BA):
    d = build_axiom_datum(BA, eqs(BA, "vars: x\n"), [], "x")
    assert d.zs == ()
    assert emit_axiom(d)[1] == "true -> exists x . true"


def test_axiom_truth_in_ba2_by_hand(ba2, excluded):
    # in the two-element algebra: exists x (x = y1 and x != y2) iff y1 != y2
    f, _ = emit_axiom(excluded)
    for y1, y2 in itertools.product(range(2), repeat=2):
        assert holds(f, ba2, {"y1": y1, "y2": y2})
        assert holds(f.cons, ba2, {"y1": y1, "y2": y2}) == (y1 != y2)


def test_quantelim_direction(BA, excluded, ba2, ba4):
    assert verify_quantelim_direction(BA, excluded)
    assert verify_quantelim_direction(BA, excluded, [ba2, ba4])


def test_quantelim_rejects_foreign_model(BDL, m3):
    d = build_axiom_datum(BDL, eqs(BDL, "vars: x, y\nx = y\n"), [], "x")
    with pytest.raises(NotInVariety):
        verify_quantelim_direction(BDL, d, [m3])


def test_in_variety(BA, BDL, ba4, m3, chain3):
    assert in_variety(BA, ba4)
    assert in_variety(BDL, chain3)
    v = in_variety(BDL, m3)
    assert not v and v.witness["operation"] in ("meet", "join")
    assert not in_variety(BA, chain3)


def test_cotheory_instance(BA, excluded, ba4):
    ext = verify_cotheory_instance(BA, excluded, ba4, {"y1": 1, "y2": 2})
    assert ext.embedding.is_injective()
    assert ext.assignment["y1"] == int(ext.embedding.map[1])
    assert holds(excluded.quantified(), ext.algebra, ext.assignment)
    assert in_variety(BA, ext.algebra)


def test_cotheory_preconditions(BA, excluded, ba4):
    with pytest.raises(PreconditionFailed):
        verify_cotheory_instance(BA, excluded, ba4, {"y1": 1, "y2": 1})
    with pytest.raises(PreconditionFailed):
        verify_cotheory_instance(BA, excluded, ba4, {"y1": 1})
    with pytest.raises(UnsupportedCase):
        verify_cotheory_instance(BA, excluded, ba4, {"y1": 0, "y2": 3})
    with pytest.raises(NotInVariety):
        verify_cotheory_instance(BA, excluded, data("chain3"), {"y1": 0, "y2": 2})


def test_formula_printing(BA):
    e = eqs(BA, "vars: x, y\nx = y\nmeet(x, y) = bot\n")
    c = phi(e)
    assert format_formula(c) == "((x = y) & (meet(x, y) = bot))"
    assert format_formula(phi(eqs(BA, "vars: x, y\n"), [e])) == "(~ ((x = y) & (meet(x, y) = bot)))"
    assert format_formula(Exists("x", Conj((EqAtom(e.equations[0]),)))) == "exists x . (x = y)"


def test_datum_json(excluded):
    d = excluded.to_json()
    assert d["x"] == "x" and d["zs"] == ["y1", "y2"]
