import itertools

import numpy as np
import pytest

from unifint.congr import (
    Congruence,
    cep_check,
    cg,
    con_ideal,
    con_lattice,
    is_congruence,
    is_distributive,
    is_dually_brouwerian,
    minimal_generators,
    residual,
    residual_in_ideal,
    subuniverses,
)
from unifint.errors import LimitExceeded
from unifint.lattice import FiniteLattice
from unifint.terms import Signature

from oracles import all_congruences, least_congruence, part_join, part_meet, random_algebra, set_partitions

SIGS = [
    Signature("a", (("f", 2), ("c", 0))),
    Signature("b", (("f", 2), ("g", 2), ("c", 0))),
    Signature("u", (("s", 1), ("c", 0))),
]


def random_cases(seed, count):
    rng = np.random.default_rng(seed)
    for _ in range(count):
        sig = SIGS[int(rng.integers(len(SIGS)))]
        yield random_algebra(rng, int(rng.integers(1, 6)), sig), rng


def test_ba4_congruences(ba4):
    theta = cg(ba4, [(0, 1)])
    assert str(theta) == "{{0,1},{2,3}}"
    L = con_lattice(ba4)
    assert len(L) == 4
    assert L[0].is_diagonal() and L[len(L) - 1].is_full()


def test_chain3_congruences(chain3):
    assert len(con_lattice(chain3)) == 4


def test_con_lattice_matches_partition_oracle():
    for A, _ in random_cases(1, 60):
        brute = set(all_congruences(A))
        mine = {c.rep for c in con_lattice(A)}
        assert mine == brute


def test_cg_matches_oracle():
    for A, rng in random_cases(2, 60):
        cons = all_congruences(A)
        for _ in range(5):
            pairs = [tuple(int(v) for v in rng.integers(0, A.size, 2)) for _ in range(int(rng.integers(0, 3)))]
            assert cg(A, pairs).rep == least_congruence(cons, pairs)


def test_is_congruence_agrees():
    for A, _ in random_cases(3, 20):
        cons = set(all_congruences(A))
        for rep in set_partitions(A.size):
            assert is_congruence(A, rep) == (rep in cons)


def test_join_meet_against_partitions():
    for A, _ in random_cases(4, 30):
        L = con_lattice(A)
        for a, b in itertools.product(L, repeat=2):
            assert a.join(b).rep == part_join(a.rep, b.rep)
            assert a.meet(b).rep == part_meet(a.rep, b.rep)
            assert L.le(L.position(a), L.position(b)) == a.le(b)


def test_minimal_generators():
    for A, _ in random_cases(5, 30):
        for theta in con_lattice(A):
            gens = minimal_generators(A, theta)
            assert cg(A, gens) == theta
            if theta.is_diagonal():
                assert gens == []


def test_residual_in_ba4(ba4):
    L = con_lattice(ba4)
    top, ta = Congruence.full(ba4), cg(ba4, [(0, 1)])
    assert residual(L, top, ta) == cg(ba4, [(0, 2)])
    assert residual_in_ideal(ba4, top, ta) == residual(L, top, ta)


def test_residual_in_ideal_matches_global(BA):
    A = BA.free(["x", "y"]).algebra
    L = con_lattice(A)
    for a in list(L)[::3]:
        ideal = con_ideal(A, a)
        assert {c for c in ideal} == {c for c in L if c.le(a)}
        for b in L:
            assert residual_in_ideal(A, a, b, ideal) == residual(L, a, b)


def test_m3_lattice_flags(m3):
    L = con_lattice(m3)
    assert len(L) == 2  # M3 is simple


def test_distributive_flags_for_non_lattice_input():
    # Con of a 3-element algebra with only constants is the partition lattice Pi_3 = M3
    A = random_algebra(np.random.default_rng(0), 3, Signature("k", (("c", 0),)))
    L = con_lattice(A)
    assert len(L) == 5
    v = is_distributive(L)
    assert not v
    a, b, c = v.witness
    assert a.meet(b.join(c)) != a.meet(b).join(a.meet(c))
    w = is_dually_brouwerian(L)
    assert not w
    x, y = w.witness
    assert residual(L, x, y) is None
    assert isinstance(L, FiniteLattice)


def test_cep(ba4, chain3, m3):
    assert cep_check(ba4)
    assert cep_check(chain3)
    v = cep_check(m3)
    assert not v
    S = v.witness.subuniverse
    assert S == (0, 1, 4)
    # the witness congruence really fails to extend
    assert v.witness.congruence != v.witness.extension


def test_cep_exhaustive_matches_principal(ba4, chain3):
    for A in (ba4, chain3):
        assert bool(cep_check(A, exhaustive=True)) == bool(cep_check(A))


def test_subuniverses(ba4, m3):
    assert subuniverses(ba4) == [frozenset({0, 3}), frozenset({0, 1, 2, 3})]
    assert len(subuniverses(m3)) == 8  # {0,4}, three with one atom, three with two, all


def test_limit(ba2):
    from unifint.finalg import free_algebra

    A = free_algebra(ba2, ["x", "y"]).algebra
    with pytest.raises(LimitExceeded):
        con_lattice(A, limit=5)


def test_cg_rejects_out_of_range(ba4):
    with pytest.raises(ValueError):
        cg(ba4, [(0, 9)])


def test_lattice_json_and_dot(ba4):
    L = con_lattice(ba4)
    d = L.to_json()
    assert d["flags"] == {"distributive": True, "duallyBrouwerian": True}
    assert d["size"] == 4
    dot = L.to_dot()
    assert dot.startswith("digraph") and dot.count("->") == 4
