from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from unifint.errors import InputError, TermSyntaxError
from unifint.lgroup import (
    InequationSystem,
    LinearTerm,
    common_coefficient,
    eliminate,
    eliminate_with_certificate,
    fuzz_elimination,
    parse_inequation_system,
    point_satisfies,
    random_system,
    scale_to_common,
    verify_certificate,
    witness_interval,
)

F = Fraction


def system(*rows, variables=None):
    return InequationSystem.of(rows, variables)


def feasible_x(S, x, p):
    """Exact oracle written from scratch: is there a rational x meeting every row at p?"""
    lo, hi = None, None
    for q in S:
        a = q.rhs.coeff(x)
        rest = sum((F(c) * p[v] for v, c in q.rhs.coeffs if v != x), F(0))
        if a == 0:
            if rest < 0:
                return False
        elif a > 0:
            b = -rest / a
            lo = b if lo is None else max(lo, b)
        else:
            b = rest / -a
            hi = b if hi is None else min(hi, b)
    return lo is None or hi is None or lo <= hi


def test_schematic_instance():
    S = system({"y1": 1, "x": 2}, {"y2": 1, "x": -2}, variables=("x", "y1", "y2"))
    out = eliminate(S, "x")
    assert [q.format(out.variables) for q in out] == ["0 <= y1 + y2"]


def test_three_rows():
    S = system({"y1": 1, "x": 1}, {"y2": 1, "x": -3}, {"y1": 1, "y2": -1}, variables=("x", "y1", "y2"))
    out, certs = eliminate_with_certificate(S, "x")
    assert {q.format(out.variables) for q in out} == {"0 <= 3*y1 + y2", "0 <= y1 - y2"}
    assert verify_certificate(S, out, certs)


def test_scale_to_common():
    S = system({"y1": 1, "x": 1}, {"y2": 1, "x": -3}, variables=("x", "y1", "y2"))
    assert common_coefficient(S, "x") == 3
    T = scale_to_common(S, "x")
    assert [q.rhs for q in T] == [LinearTerm.of({"y1": 3, "x": 3}), LinearTerm.of({"y2": 1, "x": -3})]
    U = system({"x": 2}, {"x": -2})
    assert scale_to_common(U, "x") == U and common_coefficient(U, "x") == 2


def test_no_upper_bound_gives_empty():
    assert len(eliminate(system({"y1": 1, "x": 1}, variables=("x", "y1")), "x")) == 0


def test_absent_variable_is_passthrough():
    S = system({"y1": 1, "y2": -1}, variables=("x", "y1", "y2"))
    assert list(eliminate(S, "x")) == list(S)
    with pytest.raises(InputError):
        eliminate(S, "w")


def test_point_satisfies():
    S = system({"y1": 1, "y2": 1})
    assert point_satisfies(S, {"y1": F(1), "y2": F(-1)})
    assert not point_satisfies(S, {"y1": F(-1), "y2": F(-1)})
    assert point_satisfies(system(variables=("y1",)), {"y1": F(-7)})


def test_witness_interval():
    S = system({"y1": 1, "x": 2}, {"y2": 1, "x": -2}, variables=("x", "y1", "y2"))
    i = witness_interval(S, "x", {"y1": F(4), "y2": F(4)})
    assert (i.lo, i.hi) == (F(-2), F(2)) and F(0) in i
    assert not witness_interval(S, "x", {"y1": F(4), "y2": F(-5)})
    free = witness_interval(system({"y1": 1}, variables=("x", "y1")), "x", {"y1": F(0)})
    assert free.lo is None and free.hi is None and free


def test_parser_forms():
    S = parse_inequation_system("0 <= 2*x + y1 - 3*y2\nx >= y1\nmeet(x, y2) >= 0\njoin(y1, y2) <= x\n")
    assert S.variables == ("x", "y1", "y2")
    rows = [q.format(S.variables) for q in S]
    assert rows == [
        "0 <= 2*x + y1 - 3*y2",
        "0 <= x - y1",
        "0 <= x",
        "0 <= y2",
        "0 <= x - y1",
        "0 <= x - y2",
    ]
    E = parse_inequation_system("vars: x, y\nx = y\n")
    assert [q.format(E.variables) for q in E] == ["0 <= -x + y", "0 <= x - y"]


@pytest.mark.parametrize("line", ["0 <= join(x, y)", "meet(x, y) <= z", "0 <= x + 1", "0 < x"])
def test_parser_rejects(line):
    with pytest.raises((InputError, TermSyntaxError)):
        parse_inequation_system(line + "\n")


def test_fuzz_small_is_clean_and_seeded():
    a = fuzz_elimination(seed=11, systems=60, points=60)
    assert a.passed and a.seed == 11
    assert a.to_json() == fuzz_elimination(seed=11, systems=60, points=60).to_json()


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_elimination_against_scratch_oracle(seed):
    rng = np.random.default_rng(seed)
    S = random_system(rng)
    out, certs = eliminate_with_certificate(S, "x")
    assert verify_certificate(S, out, certs)
    others = [v for v in S.variables if v != "x"]
    for _ in range(20):
        p = {v: F(int(rng.integers(-12, 13)), int(rng.integers(1, 5))) for v in others}
        assert point_satisfies(out, p) == feasible_x(S, "x", p) == bool(witness_interval(S, "x", p))
