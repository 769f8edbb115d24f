"""Direct and inverse image of congruences along a homomorphism.

For ``h : A -> B`` the direct image ``h*`` sends a congruence of ``A`` to
the congruence of ``B`` generated by the image pairs, and the inverse
image ``h^-1`` pulls a congruence of ``B`` back to ``A``.  ``h*`` is left
adjoint to ``h^-1``; ``c_h = h^-1 o h*`` is the induced closure operator.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .congr import Congruence, CongruenceLattice, cg, con_lattice, kernel
from .errors import NotSurjective
from .finalg import Homomorphism


def direct_image(h: Homomorphism, psi: Congruence, route: str = "generators") -> Congruence:
    """``h*(psi)``: congruence on the target generated by image pairs.

    ``route="generators"`` seeds from a generating set of ``psi`` (its
    recorded generators, else one pair per non-representative);
    ``route="pairs"`` seeds from every related pair.
    """
    m = h.map
    if route == "pairs":
        seeds = list(psi.pairs())
    elif route == "generators":
        seeds = list(psi.generators) if psi.generators is not None else psi.spanning_pairs()
    else:
        raise ValueError(f"unknown route {route!r}")
    return cg(h.target, [(int(m[a]), int(m[b])) for a, b in seeds])


def inverse_image(h: Homomorphism, theta: Congruence) -> Congruence:
    """``h^-1(theta) = {(a, a') : (h a, h a') in theta}``."""
    return Congruence.from_rep(h.source, theta.array[h.map])


def closure_ch(h: Homomorphism, psi: Congruence) -> Congruence:
    return inverse_image(h, direct_image(h, psi))


@dataclass(frozen=True)
class AdjointPair:
    hom: Homomorphism = field(repr=False)

    def forward(self, psi: Congruence) -> Congruence:
        return direct_image(self.hom, psi)

    def backward(self, theta: Congruence) -> Congruence:
        return inverse_image(self.hom, theta)


@dataclass(frozen=True)
class RightAdjoint:
    exists: bool
    witness: Callable[[Congruence], Congruence] | Congruence


def right_adjoint_of_compact_lifting(h: Homomorphism) -> RightAdjoint:
    """Between finite algebras every congruence is compact, so ``h^-1`` always serves."""
    return RightAdjoint(True, AdjointPair(h).backward)


@dataclass(frozen=True)
class LeftAdjointAt:
    """Outcome of computing the left adjoint of ``f*`` at one congruence.

    ``value`` is set when the adjoint exists there; ``candidate`` is the meet
    of all ``psi`` with ``theta <= f*(psi)`` and is kept as a diagnostic.
    """

    exists: bool
    value: Congruence | None
    candidate: Congruence


def left_adjoint_of_compact_lifting(
    f: Homomorphism, theta: Congruence, source_lattice: CongruenceLattice | None = None
) -> LeftAdjointAt:
    L = source_lattice if source_lattice is not None else con_lattice(f.source)
    cand = Congruence.full(f.source)
    for psi in L:
        if theta.le(direct_image(f, psi)):
            cand = cand.meet(psi)
    if theta.le(direct_image(f, cand)):
        return LeftAdjointAt(True, cand, cand)
    return LeftAdjointAt(False, None, cand)


@dataclass(frozen=True)
class PropertyCheck:
    property: str
    passed: bool
    witness: object = None

    def to_json(self):
        w = self.witness
        if isinstance(w, Congruence):
            w = w.blocks()
        elif isinstance(w, tuple):
            w = [x.blocks() if isinstance(x, Congruence) else x for x in w]
        return {"property": self.property, "pass": self.passed, "witness": w}


@dataclass(frozen=True)
class SurjectiveReport:
    checks: tuple[PropertyCheck, ...]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def __bool__(self):
        return self.passed

    def to_json(self):
        return {"pass": self.passed, "checks": [c.to_json() for c in self.checks]}


def verify_surjective_props(
    h: Homomorphism,
    source_lattice: CongruenceLattice | None = None,
    target_lattice: CongruenceLattice | None = None,
) -> SurjectiveReport:
    """For surjective ``h`` check ``c_h(psi) = psi v ker h``, the image of ``c_h``,
    and that ``h^-1`` is a bijection of ``Con B`` onto ``[ker h, top]``."""
    if not h.is_surjective():
        raise NotSurjective("homomorphism is not surjective")
    LA = source_lattice if source_lattice is not None else con_lattice(h.source)
    LB = target_lattice if target_lattice is not None else con_lattice(h.target)
    ker = kernel(h)

    join_ok = PropertyCheck("closure is join with kernel", True)
    image = set()
    for psi in LA:
        c = closure_ch(h, psi)
        image.add(c)
        if join_ok.passed and c != psi.join(ker):
            join_ok = PropertyCheck("closure is join with kernel", False, (psi, c))

    interval = {t for t in LA if ker.le(t)}
    missing = sorted(interval ^ image, key=lambda c: c.rep)
    image_ok = PropertyCheck(
        "closure image is the interval above the kernel", not missing, missing[0] if missing else None
    )

    pulled = [inverse_image(h, t) for t in LB]
    bij = PropertyCheck("inverse image is a bijection onto the interval", True)
    if len(set(pulled)) != len(pulled):
        seen = {}
        for t, p in zip(LB, pulled):
            if p in seen:
                bij = PropertyCheck(bij.property, False, (seen[p], t))
                break
            seen[p] = t
    elif set(pulled) != interval:
        extra = sorted(set(pulled) ^ interval, key=lambda c: c.rep)
        bij = PropertyCheck(bij.property, False, extra[0])
    return SurjectiveReport((join_ok, image_ok, bij))


def adjunction_violation(h: Homomorphism, LA: CongruenceLattice, LB: CongruenceLattice):
    """First ``(psi, theta)`` breaking ``h*(psi) <= theta  iff  psi <= h^-1(theta)``."""
    fwd = [direct_image(h, p) for p in LA]
    back = [inverse_image(h, t) for t in LB]
    for p, hp in zip(LA, fwd):
        for t, ht in zip(LB, back):
            if hp.le(t) != p.le(ht):
                return p, t
    return None


def images_as_indices(h: Homomorphism, LA: CongruenceLattice, LB: CongruenceLattice):
    """``h*`` and ``h^-1`` as index arrays between two enumerated lattices."""
    fwd = np.array([LB.position(direct_image(h, p)) for p in LA], dtype=np.int64)
    back = np.array([LA.position(inverse_image(h, t)) for t in LB], dtype=np.int64)
    return fwd, back
