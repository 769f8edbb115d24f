import itertools

import numpy as np
import pytest

from unifint.errors import InputError
from unifint.lattice import (
    FiniteLattice,
    check_distributive,
    check_dually_brouwerian,
    diamond,
    lattice_residual,
    pentagon,
)


def chain(m):
    return FiniteLattice(np.triu(np.ones((m, m), dtype=bool)))


def boolean(k):
    m = 1 << k
    leq = [[(a & b) == a for b in range(m)] for a in range(m)]
    return FiniteLattice(leq)


def brute_distributive(L):
    m = len(L)
    return all(
        L.meet(a, L.join(b, c)) == L.join(L.meet(a, b), L.meet(a, c))
        for a, b, c in itertools.product(range(m), repeat=3)
    )


def test_tables_of_boolean_lattice():
    L = boolean(3)
    for a, b in itertools.product(range(8), repeat=2):
        assert L.join(a, b) == a | b and L.meet(a, b) == a & b
    assert (L.bottom, L.top) == (0, 7)


@pytest.mark.parametrize("L, dist", [(chain(4), True), (boolean(2), True), (diamond(), False), (pentagon(), False)])
def test_distributivity_against_brute_force(L, dist):
    assert brute_distributive(L) == dist
    v = check_distributive(L)
    assert bool(v) == dist
    if not dist:
        a, b, c = v.witness
        assert L.meet(a, L.join(b, c)) != L.join(L.meet(a, b), L.meet(a, c))


def test_diamond_is_not_dually_brouwerian():
    L = diamond()
    v = check_dually_brouwerian(L)
    assert not v
    a, b = v.witness
    assert lattice_residual(L, a, b) is None
    # two atoms c with a <= b v c and no least one among them
    cands = [c for c in range(len(L)) if L.le(a, L.join(b, c))]
    assert not any(all(L.le(c, d) for d in cands) for c in cands)


@pytest.mark.parametrize("L", [chain(5), boolean(3)])
def test_residual_adjunction(L):
    m = len(L)
    assert check_dually_brouwerian(L)
    for a, b, c in itertools.product(range(m), repeat=3):
        r = lattice_residual(L, a, b)
        assert L.le(r, c) == L.le(a, L.join(b, c))


@pytest.mark.parametrize(
    "leq",
    [
        [[True, True], [True, True]],
        [[True, False], [False, False]],
        [[True, True, False], [False, True, True], [False, False, True]],
        [[True, False], [False, True]],  # antichain: no join
    ],
)
def test_bad_orders(leq):
    with pytest.raises(InputError):
        FiniteLattice(leq)


def test_covers_round_trip():
    L = pentagon()
    M = FiniteLattice.from_covers(len(L), L.covers())
    assert (M.leq == L.leq).all()
