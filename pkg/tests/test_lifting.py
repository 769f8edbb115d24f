import pytest

from unifint.congr import Congruence, cg, con_lattice, kernel
from unifint.errors import NotSurjective
from unifint.finalg import Homomorphism, quotient
from unifint.lifting import (
    adjunction_violation,
    direct_image,
    images_as_indices,
    inverse_image,
    left_adjoint_of_compact_lifting,
    right_adjoint_of_compact_lifting,
    verify_surjective_props,
)

from oracles import least_congruence, all_congruences


def test_direct_image_routes_agree(BA):
    i = BA.inclusion(["y"], ["x", "y"])
    src = i.source
    for psi in con_lattice(src):
        a = direct_image(i, psi, route="generators")
        b = direct_image(i, psi, route="pairs")
        assert a == b
    with pytest.raises(ValueError):
        direct_image(i, Congruence.diagonal(src), route="other")


def test_direct_image_against_oracle(ba4, ba2):
    # ba2 -> ba4 on the constants, images generate congruences of ba4
    h = Homomorphism(ba2, ba4, [0, 3])
    cons = all_congruences(ba4)
    for psi in con_lattice(ba2):
        want = least_congruence(cons, [(int(h.map[a]), int(h.map[b])) for a, b in psi.pairs()])
        assert direct_image(h, psi).rep == want


def test_right_adjoint_on_inclusion(BDL):
    i = BDL.inclusion(["y"], ["x", "y"])
    LA, LB = BDL.con(["y"]), BDL.con(["x", "y"])
    ok, back = right_adjoint_of_compact_lifting(i).exists, right_adjoint_of_compact_lifting(i).witness
    assert ok
    assert adjunction_violation(i, LA, LB) is None
    for t in LB:
        assert back(t) == inverse_image(i, t)
    fwd, bwd = images_as_indices(i, LA, LB)
    assert len(fwd) == len(LA) and len(bwd) == len(LB)


def test_left_adjoint_example(BA):
    # eliminating x from y1 = x collapses F(y1)
    i = BA.inclusion(["y1"], ["x", "y1"])
    F = BA.free(["x", "y1"])
    theta = cg(F.algebra, [(F.generator_element("y1"), F.generator_element("x"))])
    res = left_adjoint_of_compact_lifting(i, theta)
    assert res.exists and res.value.is_full()
    assert left_adjoint_of_compact_lifting(i, Congruence.diagonal(F.algebra)).value.is_diagonal()


def test_surjective_props(ba4):
    Q, p = quotient(ba4, cg(ba4, [(0, 1)]))
    rep = verify_surjective_props(p)
    assert rep.passed and len(rep.checks) == 3
    assert verify_surjective_props(Homomorphism.identity(ba4))
    one, to_one = quotient(ba4, Congruence.full(ba4))
    assert verify_surjective_props(to_one)
    assert kernel(to_one).is_full()


def test_surjective_props_rejects_non_surjective(ba2, ba4):
    with pytest.raises(NotSurjective):
        verify_surjective_props(Homomorphism(ba2, ba4, [0, 3]))
