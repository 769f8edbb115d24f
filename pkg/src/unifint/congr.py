"""Congruences of finite algebras and their lattices.

A congruence is stored as its canonical partition: ``rep[a]`` is the least
element of the block of ``a``.  Two congruences are equal iff their
``rep`` tuples are equal.

Congruence extension is tested on principal congruences of subalgebras by
default.  If ``cg_A(a, b)`` restricted to ``B`` equals ``cg_B(a, b)`` for
every pair of ``B``, each principal congruence of ``B`` extends.  Pass
``exhaustive=True`` to test every congruence of every subalgebra instead.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from . import kernels
from .errors import LimitExceeded
from .finalg import FiniteAlgebra, Homomorphism, generated_subalgebra, subalgebra
from .lattice import (
    FiniteLattice,
    Verdict,
    check_distributive,
    check_dually_brouwerian,
    lattice_residual,
)

DEFAULT_CONGRUENCE_LIMIT = 20_000
DEFAULT_SUBALGEBRA_LIMIT = 10_000
SINGLE_PAIR_SEARCH = 5_000


def canonical(rep) -> np.ndarray:
    """Least-representative normal form of any block labelling."""
    labels = np.asarray(rep)
    _, first, inv = np.unique(labels, return_index=True, return_inverse=True)
    return first[inv.reshape(-1)].astype(np.int32)


@dataclass(frozen=True)
class Congruence:
    algebra: FiniteAlgebra = field(compare=False, repr=False)
    rep: tuple[int, ...]
    generators: tuple[tuple[int, int], ...] | None = field(default=None, compare=False, repr=False)

    @classmethod
    def from_rep(cls, algebra, rep, generators=None) -> "Congruence":
        gens = None if generators is None else tuple((int(a), int(b)) for a, b in generators)
        return cls(algebra, tuple(int(r) for r in canonical(rep)), gens)

    @classmethod
    def diagonal(cls, algebra) -> "Congruence":
        return cls(algebra, tuple(range(algebra.size)), ())

    @classmethod
    def full(cls, algebra) -> "Congruence":
        return cls(algebra, (0,) * algebra.size)

    @cached_property
    def array(self) -> np.ndarray:
        a = np.array(self.rep, dtype=np.int32)
        a.flags.writeable = False
        return a

    @property
    def size(self) -> int:
        return len(self.rep)

    def contains(self, a: int, b: int) -> bool:
        return self.rep[a] == self.rep[b]

    def __contains__(self, pair) -> bool:
        return self.contains(*pair)

    def le(self, other: "Congruence") -> bool:
        o = other.array
        return bool((o[self.array] == o).all())

    def __le__(self, other):
        return self.le(other)

    def __lt__(self, other):
        return self.le(other) and self != other

    def join(self, other: "Congruence") -> "Congruence":
        rep = kernels.partition_join(self.array, other.array)
        return Congruence(self.algebra, tuple(rep.tolist()))

    def meet(self, other: "Congruence") -> "Congruence":
        key = self.array.astype(np.int64) * self.size + other.array
        return Congruence(self.algebra, tuple(canonical(key).tolist()))

    __or__ = join
    __and__ = meet

    @property
    def num_blocks(self) -> int:
        return sum(1 for a, r in enumerate(self.rep) if a == r)

    def is_diagonal(self) -> bool:
        return all(a == r for a, r in enumerate(self.rep))

    def is_full(self) -> bool:
        return all(r == 0 for r in self.rep)

    def blocks(self) -> list[list[int]]:
        out: dict[int, list[int]] = {}
        for a, r in enumerate(self.rep):
            out.setdefault(r, []).append(a)
        return list(out.values())

    def pairs(self) -> Iterable[tuple[int, int]]:
        """All related pairs ``a < b``, lexicographically."""
        for a, b in itertools.combinations(range(self.size), 2):
            if self.rep[a] == self.rep[b]:
                yield a, b

    def spanning_pairs(self) -> list[tuple[int, int]]:
        """``(rep[a], a)`` for non-representatives; generates the partition."""
        return [(r, a) for a, r in enumerate(self.rep) if r != a]

    def __str__(self):
        return "{" + ",".join("{" + ",".join(map(str, b)) + "}" for b in self.blocks()) + "}"


def cg(A: FiniteAlgebra, pairs: Iterable[tuple[int, int]] = (), base: Congruence | None = None) -> Congruence:
    """Least congruence containing ``pairs`` (and ``base`` when given)."""
    pairs = [(int(a), int(b)) for a, b in pairs]
    for a, b in pairs:
        if not (0 <= a < A.size and 0 <= b < A.size):
            raise ValueError(f"pair ({a}, {b}) is outside the universe")
    start = np.arange(A.size, dtype=np.int32) if base is None else base.array
    rep = kernels.cg_close(A.translation_generators, start, pairs)
    gens = tuple(pairs) if base is None else None
    return Congruence(A, tuple(rep.tolist()), gens)


def kernel(h: Homomorphism) -> Congruence:
    return Congruence(h.source, tuple(h.kernel_rep().tolist()))


def is_congruence(A: FiniteAlgebra, rep) -> bool:
    """Direct compatibility test, independent of the closure kernels."""
    rep = np.asarray(rep)
    T = A.translations
    return bool((rep[T] == rep[T[rep]]).all())


def principal_congruences(A: FiniteAlgebra, pairs=None) -> list[Congruence]:
    """Distinct principal congruences over ``pairs`` (all ``a < b`` by default), first-seen order."""
    if pairs is None:
        pairs = list(itertools.combinations(range(A.size), 2))
    if not pairs:
        return []
    reps = kernels.principal_batch(A.translation_generators, pairs)
    seen: dict[bytes, Congruence] = {}
    for (a, b), row in zip(pairs, reps):
        key = row.tobytes()
        if key not in seen:
            seen[key] = Congruence(A, tuple(row.tolist()), ((int(a), int(b)),))
    return list(seen.values())


class CongruenceLattice(FiniteLattice):
    """An enumerated lattice of congruences; element indices follow ``congruences``."""

    def __init__(self, algebra: FiniteAlgebra, congruences: Sequence[Congruence]):
        self.algebra = algebra
        self.congruences = list(congruences)
        self.index = {c: i for i, c in enumerate(self.congruences)}
        reps = np.array([c.rep for c in self.congruences], dtype=np.int64)
        m = len(reps)
        leq = np.empty((m, m), dtype=bool)
        for i in range(m):
            # theta_i <= theta_j  iff  rep_j is constant on the blocks of theta_i
            leq[i] = (reps[:, reps[i]] == reps).all(axis=1)
        super().__init__(leq, labels=self.congruences)

    def __iter__(self):
        return iter(self.congruences)

    def __getitem__(self, i: int) -> Congruence:
        return self.congruences[i]

    def __contains__(self, theta) -> bool:
        return theta in self.index

    def position(self, theta: Congruence) -> int:
        try:
            return self.index[theta]
        except KeyError:
            raise ValueError(f"{theta} is not in this lattice") from None

    def to_json(self) -> dict:
        return {
            "algebra": self.algebra.name,
            "size": len(self),
            "congruences": [c.blocks() for c in self.congruences],
            "order": self.leq.astype(int).tolist(),
            "flags": {
                "distributive": bool(is_distributive(self)),
                "duallyBrouwerian": bool(is_dually_brouwerian(self)),
            },
        }

    def to_dot(self) -> str:
        lines = ["digraph Con {", "  rankdir=BT;"]
        for i, c in enumerate(self.congruences):
            lines.append(f'  n{i} [label="{c}"];')
        for a, b in self.covers():
            lines.append(f"  n{a} -> n{b};")
        lines.append("}")
        return "\n".join(lines) + "\n"


def _join_closure(A, principals, limit) -> CongruenceLattice:
    diag = Congruence.diagonal(A)
    found = {diag: None}
    for p in principals:
        if p in found:
            # already a join of earlier principals, so nothing new arises
            continue
        for x in list(found):
            j = x.join(p)
            if j not in found:
                found[j] = None
                if len(found) > limit:
                    raise LimitExceeded(f"more than {limit} congruences")
    ordered = sorted(found, key=lambda c: (-c.num_blocks, c.rep))
    return CongruenceLattice(A, ordered)


def con_lattice(A: FiniteAlgebra, limit: int = DEFAULT_CONGRUENCE_LIMIT) -> CongruenceLattice:
    """All congruences of ``A`` as the join-closure of its principal congruences."""
    return _join_closure(A, principal_congruences(A), limit)


def con_ideal(A: FiniteAlgebra, theta: Congruence, limit: int = DEFAULT_CONGRUENCE_LIMIT) -> CongruenceLattice:
    """The principal ideal of ``Con A`` below ``theta``."""
    pairs = list(theta.pairs())
    return _join_closure(A, principal_congruences(A, pairs), limit)


def residual(L: CongruenceLattice, a: Congruence, b: Congruence) -> Congruence | None:
    """``a - b``: least ``c`` in ``L`` with ``a <= b v c``; None if there is none."""
    r = lattice_residual(L, L.position(a), L.position(b))
    return None if r is None else L[r]


def _labelled(L, verdict):
    if verdict.ok or not isinstance(L, CongruenceLattice):
        return verdict
    return Verdict(False, tuple(L[i] for i in verdict.witness))


def is_distributive(L: FiniteLattice) -> Verdict:
    """Witness on failure: ``(a, b, c)`` with ``a ^ (b v c) != (a ^ b) v (a ^ c)``."""
    return _labelled(L, check_distributive(L))


def is_dually_brouwerian(L: FiniteLattice) -> Verdict:
    """Witness on failure: ``(a, b)`` whose residual ``a - b`` does not exist."""
    return _labelled(L, check_dually_brouwerian(L))


def subuniverses(A: FiniteAlgebra, limit: int = DEFAULT_SUBALGEBRA_LIMIT) -> list[frozenset[int]]:
    """All subuniverses, by closing under one more element at a time."""
    if A.sig.has_constants:
        start = [generated_subalgebra(A, [], budget=A.size).universe]
    else:
        start = [generated_subalgebra(A, [a], budget=A.size).universe for a in range(A.size)]
    seen = dict.fromkeys(start)
    frontier = list(seen)
    while frontier:
        nxt = []
        for S in frontier:
            for a in range(A.size):
                if a in S:
                    continue
                T = generated_subalgebra(A, sorted(S | {a}), budget=A.size).universe
                if T not in seen:
                    seen[T] = None
                    nxt.append(T)
                    if len(seen) > limit:
                        raise LimitExceeded(f"more than {limit} subalgebras")
        frontier = nxt
    return sorted(seen, key=lambda S: (len(S), sorted(S)))


@dataclass(frozen=True)
class CEPFailure:
    subuniverse: tuple[int, ...]
    congruence: tuple[tuple[int, ...], ...]
    extension: tuple[tuple[int, ...], ...]

    def to_json(self):
        return {
            "subuniverse": list(self.subuniverse),
            "congruence": [list(b) for b in self.congruence],
            "leastExtensionRestricted": [list(b) for b in self.extension],
        }


def cep_check(
    A: FiniteAlgebra,
    limit: int = DEFAULT_SUBALGEBRA_LIMIT,
    exhaustive: bool = False,
    congruence_limit: int = DEFAULT_CONGRUENCE_LIMIT,
) -> Verdict:
    """Does every congruence of every subalgebra extend to ``A``?

    ``theta`` on ``B`` extends iff the least candidate ``cg_A(theta)``
    restricts back to ``theta``.
    """
    for S in subuniverses(A, limit):
        B, emb = subalgebra(A, S)
        if exhaustive:
            thetas = con_lattice(B, congruence_limit).congruences
        else:
            thetas = principal_congruences(B)
        for theta in thetas:
            ext = cg(A, [(emb(a), emb(b)) for a, b in theta.spanning_pairs()])
            back = Congruence.from_rep(B, ext.array[emb.map])
            if back != theta:
                blocks = lambda c: tuple(tuple(int(emb.map[a]) for a in blk) for blk in c.blocks())
                return Verdict(False, CEPFailure(tuple(sorted(S)), blocks(theta), blocks(back)))
    return Verdict(True)


def minimal_generators(A: FiniteAlgebra, theta: Congruence) -> list[tuple[int, int]]:
    """A generating pair list for ``theta`` in lexicographic pair order.

    A single generating pair is used when one exists; otherwise pairs are
    added greedily and then pruned.
    """
    pairs = list(theta.pairs())
    if not pairs:
        return []
    if len(pairs) <= SINGLE_PAIR_SEARCH:
        # a principal congruence gets its first generating pair
        reps = kernels.principal_batch(A.translation_generators, pairs)
        hit = np.nonzero((reps == theta.array).all(axis=1))[0]
        if hit.size:
            return [pairs[int(hit[0])]]
    gens: list[tuple[int, int]] = []
    cur = Congruence.diagonal(A)
    for a, b in pairs:
        if cur == theta:
            break
        if not cur.contains(a, b):
            gens.append((a, b))
            cur = cg(A, gens)
    for p in list(gens):
        rest = [q for q in gens if q != p]
        if cg(A, rest) == theta:
            gens = rest
    return gens


def residual_in_ideal(A: FiniteAlgebra, a: Congruence, b: Congruence, ideal: CongruenceLattice | None = None):
    """``a - b`` searched among congruences below ``a``.

    Always ``a - b <= a``, so this finds the global residual whenever it
    exists.  A least element found here is the global residual when
    ``Con A`` is distributive.
    """
    L = ideal if ideal is not None else con_ideal(A, a)
    cand = [c for c in L if a.le(b.join(c))]
    for c in cand:
        if all(c.le(d) for d in cand):
            return c
    return None
