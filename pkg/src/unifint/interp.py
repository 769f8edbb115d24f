"""Equational consequence and uniform interpolants over ``HSP(G)``.

Every question is reduced to congruences of finite free algebras:
``Sigma |= Delta`` over variables ``xs`` iff ``cg(Delta) <= cg(Sigma)`` in
``F(xs)``.  Right interpolants pull the premise congruence back along the
inclusion ``F(ys) -> F(xs, ys)``; left interpolants use the left adjoint
of the direct image along that inclusion.
"""

from __future__ import annotations

import itertools
import threading
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .congr import (
    Congruence,
    CongruenceLattice,
    cg,
    con_lattice,
    minimal_generators,
    residual,
    residual_in_ideal,
)
from .errors import InputError, ResidualMissing
from .finalg import FiniteAlgebra, FreeAlgebra, Homomorphism, default_budget, free_algebra, inclusion
from .lifting import direct_image, inverse_image, left_adjoint_of_compact_lifting
from .terms import Equation, EquationSet


class VarietyEngine:
    """``V = HSP(G)`` with a cache of free algebras and inclusions between them."""

    def __init__(self, G, budget: int | None = None):
        if isinstance(G, (list, tuple)):
            from .finalg import direct_product

            G = G[0] if len(G) == 1 else direct_product(list(G))
        self.G: FiniteAlgebra = G
        self.sig = G.sig
        self.budget = budget or default_budget()
        self._free: dict[tuple[str, ...], FreeAlgebra] = {}
        self._incl: dict[tuple, Homomorphism] = {}
        self._con: dict[tuple[str, ...], CongruenceLattice] = {}
        self._lock = threading.Lock()

    def free(self, vars: Sequence[str]) -> FreeAlgebra:
        key = tuple(vars)
        with self._lock:
            F = self._free.get(key)
        if F is None:
            F = free_algebra(self.G, key, self.budget)
            with self._lock:
                F = self._free.setdefault(key, F)
        return F

    def inclusion(self, small: Sequence[str], big: Sequence[str]) -> Homomorphism:
        key = (tuple(small), tuple(big))
        with self._lock:
            h = self._incl.get(key)
        if h is None:
            h = inclusion(self.free(small), self.free(big))
            with self._lock:
                h = self._incl.setdefault(key, h)
        return h

    def con(self, vars: Sequence[str], limit: int | None = None) -> CongruenceLattice:
        key = tuple(vars)
        with self._lock:
            L = self._con.get(key)
        if L is None:
            kw = {} if limit is None else {"limit": limit}
            L = con_lattice(self.free(key).algebra, **kw)
            with self._lock:
                L = self._con.setdefault(key, L)
        return L

    def theta(self, vars: Sequence[str], eqs: Iterable[Equation]) -> Congruence:
        """``cg`` of an equation set, read as element pairs of ``F(vars)``."""
        F = self.free(vars)
        return cg(F.algebra, [F.pair_of(e) for e in eqs])

    def equations(self, vars: Sequence[str], pairs: Iterable[tuple[int, int]]) -> EquationSet:
        F = self.free(vars)
        w = F.witnesses
        return EquationSet(tuple(Equation(w[a], w[b]) for a, b in pairs), tuple(vars))

    def generators_of(self, vars: Sequence[str], theta: Congruence) -> EquationSet:
        return self.equations(vars, minimal_generators(self.free(vars).algebra, theta))


def _merge_vars(*lists: Iterable[str]) -> tuple[str, ...]:
    out: list[str] = []
    for vs in lists:
        for v in vs:
            if v not in out:
                out.append(v)
    return tuple(out)


def fresh_names(count: int, avoid: Iterable[str], prefix: str = "z") -> tuple[str, ...]:
    taken = set(avoid)
    out = []
    i = 0
    while len(out) < count:
        name = f"{prefix}{i}"
        if name not in taken:
            out.append(name)
        i += 1
    return tuple(out)


def entails(V: VarietyEngine, sigma: EquationSet, delta: EquationSet, vars: Sequence[str] | None = None) -> bool:
    xs = tuple(vars) if vars is not None else _merge_vars(sigma.vars, delta.vars)
    sigma.check(V.sig)
    delta.check(V.sig)
    th = V.theta(xs, sigma)
    F = V.free(xs)
    return all(th.contains(*F.pair_of(e)) for e in delta)


@dataclass(frozen=True)
class Verification:
    passed: bool
    checked: int
    witness: object = None
    detail: str = ""

    def __bool__(self):
        return self.passed

    def to_json(self):
        return {"pass": self.passed, "checked": self.checked, "witness": self.witness, "detail": self.detail}


@dataclass(frozen=True)
class InterpolantResult:
    pi: EquationSet
    eliminated: tuple[str, ...]
    kind: str
    verified: Verification | None = field(default=None, compare=False)

    def __post_init__(self):
        clash = set(self.pi.vars) & set(self.eliminated)
        if clash:
            raise ValueError(f"interpolant mentions eliminated variables {sorted(clash)}")

    def to_json(self):
        d = {
            "kind": self.kind,
            "eliminated": list(self.eliminated),
            "vars": list(self.pi.vars),
            "pi": [str(e) for e in self.pi],
        }
        if self.verified is not None:
            d["verified"] = self.verified.to_json()
        return d


@dataclass(frozen=True)
class NoLeftInterpolant:
    """The left adjoint does not exist at the congruence of ``delta``."""

    delta: EquationSet
    eliminated: tuple[str, ...]
    candidate: EquationSet

    def __bool__(self):
        return False

    def to_json(self):
        return {
            "kind": "left",
            "exists": False,
            "eliminated": list(self.eliminated),
            "candidate": [str(e) for e in self.candidate],
        }


def _split(eqs: EquationSet, eliminate: Sequence[str]) -> tuple[tuple[str, ...], tuple[str, ...]]:
    elim = tuple(eliminate)
    if len(set(elim)) != len(elim):
        raise InputError("duplicate variables to eliminate")
    kept = tuple(v for v in eqs.vars if v not in elim)
    return kept, _merge_vars(eqs.vars, elim)


def right_uniform_interpolant(V: VarietyEngine, sigma: EquationSet, eliminate: Sequence[str]) -> InterpolantResult:
    """``Pi(ys)`` generating ``i^-1(cg(Sigma))`` for ``i : F(ys) -> F(xs, ys)``."""
    sigma.check(V.sig)
    ys, allv = _split(sigma, eliminate)
    i = V.inclusion(ys, allv)
    psi = inverse_image(i, V.theta(allv, sigma))
    return InterpolantResult(V.generators_of(ys, psi), tuple(eliminate), "right")


def left_uniform_interpolant(V: VarietyEngine, delta: EquationSet, eliminate: Sequence[str]):
    """``Pi(ys)`` generating the left adjoint of ``i*`` at ``cg(Delta)``, or ``NoLeftInterpolant``."""
    delta.check(V.sig)
    ys, allv = _split(delta, eliminate)
    i = V.inclusion(ys, allv)
    res = left_adjoint_of_compact_lifting(i, V.theta(allv, delta), V.con(ys))
    if not res.exists:
        return NoLeftInterpolant(delta, tuple(eliminate), V.generators_of(ys, res.candidate))
    return InterpolantResult(V.generators_of(ys, res.value), tuple(eliminate), "left")


def _pair_key(rep: np.ndarray, q: np.ndarray | None = None) -> np.ndarray:
    r = rep if q is None else rep[q]
    return r[:, None] == r[None, :]


def term_function(t, G: FiniteAlgebra, vars: Sequence[str]) -> np.ndarray:
    """Values of ``t`` in ``G`` at every assignment to ``vars``, lexicographic, first variable slowest."""
    from .terms import Var

    k = len(vars)
    grid = np.indices((G.size,) * k, dtype=np.int32).reshape(k, -1) if k else np.zeros((0, 1), np.int32)
    width = grid.shape[1]

    def go(u):
        if isinstance(u, Var):
            return grid[list(vars).index(u.name)]
        if not u.args:
            return np.full(width, G.constant(u.symbol), dtype=np.int32)
        return G.apply(u.symbol, [go(c) for c in u.args])

    return go(t)


def _sigma_pairs_semantic(V: VarietyEngine, sigma: EquationSet, big: Sequence[str], small: Sequence[str]):
    """Pair-entailment matrix over ``F(small)`` computed by evaluation in ``G``.

    Exact when every algebra of ``V`` embeds in a power of ``G``.
    """
    G = V.G
    ok = np.ones(G.size ** len(big), dtype=bool)
    for e in sigma:
        ok &= term_function(e.lhs, G, big) == term_function(e.rhs, G, big)
    Fs = V.free(small)
    grid = np.indices((G.size,) * len(big), dtype=np.int64).reshape(len(big), -1)
    q = np.zeros(grid.shape[1], dtype=np.int64)
    for v in small:
        q = q * G.size + grid[list(big).index(v)]
    cols = Fs.tuples[:, q[ok]]
    return (cols[:, None, :] == cols[None, :, :]).all(axis=2)


def _sigma_pairs_free(V: VarietyEngine, sigma: EquationSet, big: Sequence[str], small: Sequence[str]):
    i = V.inclusion(small, big)
    return _pair_key(V.theta(big, sigma).array, i.map)


def verify_right(
    V: VarietyEngine,
    sigma: EquationSet,
    result: InterpolantResult,
    fresh: int = 1,
    method: str = "free",
) -> Verification:
    """``Sigma |= eps  iff  Pi |= eps`` for every element pair ``eps`` of ``F(ys, zs)``, ``|zs| <= fresh``.

    ``method="free"`` decides ``Sigma |= eps`` by congruence closure in
    ``F(xs, ys, zs)``.  ``method="semantic"`` evaluates in ``G`` over all
    assignments, which needs no free algebra on all the variables and is
    exact when ``V`` is generated by ``G`` as a quasivariety (Boolean
    algebras and bounded distributive lattices, for instance).
    """
    if method not in ("free", "semantic"):
        raise ValueError(f"unknown method {method!r}")
    ys, allv = _split(sigma, result.eliminated)
    checked = 0
    for k in range(fresh + 1):
        zs = fresh_names(k, allv)
        small = ys + zs
        big = allv + zs
        if method == "free":
            lhs = _sigma_pairs_free(V, sigma, big, small)
        else:
            lhs = _sigma_pairs_semantic(V, sigma, _merge_vars(sigma.vars, big), small)
        rhs = _pair_key(V.theta(small, result.pi).array)
        checked += lhs.size
        bad = np.argwhere(lhs != rhs)
        if bad.size:
            a, b = (int(t) for t in bad[0])
            w = V.free(small).witnesses
            side = "Sigma" if lhs[a, b] else "Pi"
            return Verification(
                False, checked, {"epsilon": f"{w[a]} = {w[b]}", "vars": list(small), "entailedBy": side}
            )
    return Verification(True, checked, detail=f"{method}, fresh variables up to {fresh}")


def verify_left(
    V: VarietyEngine,
    delta: EquationSet,
    result: InterpolantResult,
    fresh: int = 1,
    samples: int = 200,
    seed: int = 0,
) -> Verification:
    """``Gamma |= Delta  iff  Gamma |= Pi`` for principal ``Gamma`` over ``F(xs, ys)``, ``|xs| <= fresh``,
    plus a seeded sample of two-generator ``Gamma``."""
    ys, allv = _split(delta, result.eliminated)
    rng = np.random.default_rng(seed)
    checked = 0
    for k in range(fresh + 1):
        xs = fresh_names(k, allv, prefix="x")
        gvars = xs + ys
        big = xs + allv
        F = V.free(gvars)
        j = V.inclusion(gvars, big)
        th_delta = V.theta(big, delta)
        pi_pairs = [F.pair_of(e) for e in result.pi]
        n = F.size
        gammas: list[list[tuple[int, int]]] = [[]]
        gammas += [[p] for p in itertools.combinations(range(n), 2)]
        all_pairs = list(itertools.combinations(range(n), 2))
        if len(all_pairs) >= 2:
            for _ in range(samples):
                a, b = rng.choice(len(all_pairs), size=2, replace=False)
                gammas.append([all_pairs[a], all_pairs[b]])
        for gamma in gammas:
            g_small = cg(F.algebra, gamma)
            g_big = cg(j.target, [(int(j.map[a]), int(j.map[b])) for a, b in gamma])
            lhs = th_delta.le(g_big)
            rhs = all(g_small.contains(a, b) for a, b in pi_pairs)
            checked += 1
            if lhs != rhs:
                w = F.witnesses
                return Verification(
                    False,
                    checked,
                    {"gamma": [f"{w[a]} = {w[b]}" for a, b in gamma], "vars": list(gvars), "entailsDelta": lhs},
                )
    return Verification(True, checked, detail=f"fresh variables up to {fresh}, {samples} sampled pairs")


def verify_uniform_interpolant(V: VarietyEngine, source: EquationSet, result: InterpolantResult, fresh: int = 1, **kw):
    if result.kind == "right":
        return verify_right(V, source, result, fresh, **kw)
    if result.kind == "left":
        return verify_left(V, source, result, fresh, **kw)
    raise ValueError(f"cannot verify an interpolant of kind {result.kind!r}")


@dataclass(frozen=True)
class SquareFailure:
    theta: tuple
    via_j: tuple
    via_i: tuple


def dip_square_check(V: VarietyEngine, xs: Sequence[str], ys: Sequence[str], zs: Sequence[str]):
    """``k^-1(j*(theta)) = l*(i^-1(theta))`` for every ``theta`` in ``Con F(xs, ys)``.

    ``i : F(ys) -> F(xs,ys)``, ``j : F(xs,ys) -> F(xs,ys,zs)``,
    ``k : F(ys,zs) -> F(xs,ys,zs)``, ``l : F(ys) -> F(ys,zs)``.
    """
    from .lattice import Verdict

    xs, ys, zs = tuple(xs), tuple(ys), tuple(zs)
    if len(set(xs + ys + zs)) != len(xs + ys + zs):
        raise InputError("the three variable lists must be disjoint")
    xy, yz, xyz = xs + ys, ys + zs, xs + ys + zs
    i = V.inclusion(ys, xy)
    j = V.inclusion(xy, xyz)
    k = V.inclusion(yz, xyz)
    l = V.inclusion(ys, yz)
    for theta in V.con(xy):
        left = inverse_image(k, direct_image(j, theta))
        right = direct_image(l, inverse_image(i, theta))
        if left != right:
            return Verdict(False, SquareFailure(tuple(theta.blocks()), tuple(left.blocks()), tuple(right.blocks())))
    return Verdict(True)


def maehara_residual_interpolant(
    V: VarietyEngine,
    sigma: EquationSet,
    delta: EquationSet,
    vars: Sequence[str] | None = None,
    use_ideal: bool = False,
    verify: bool = True,
) -> InterpolantResult:
    """``Pi`` generating ``cg(Delta) - cg(Sigma)`` in ``Con F(xs)``.

    With ``use_ideal`` the residual is computed inside the ideal below
    ``cg(Delta)``, which agrees with the full lattice when it is distributive.
    """
    sigma.check(V.sig)
    delta.check(V.sig)
    xs = tuple(vars) if vars is not None else _merge_vars(sigma.vars, delta.vars)
    F = V.free(xs)
    a = V.theta(xs, delta)
    b = V.theta(xs, sigma)
    if use_ideal:
        r = residual_in_ideal(F.algebra, a, b)
    else:
        L = V.con(xs)
        r = residual(L, a, b)
    if r is None:
        raise ResidualMissing("cg(Delta) - cg(Sigma) does not exist", witness=(a.blocks(), b.blocks()))
    pi = V.generators_of(xs, r)
    ver = None
    if verify:
        ver = _verify_maehara(F, a, b, r)
    return InterpolantResult(pi, (), "maehara-residual", ver)


def _verify_maehara(F: FreeAlgebra, a: Congruence, b: Congruence, r: Congruence) -> Verification:
    # Gamma, Sigma |= Delta  iff  Gamma |= Pi, for every principal Gamma
    checked = 0
    for gamma in [[]] + [[p] for p in itertools.combinations(range(F.size), 2)]:
        g = cg(F.algebra, gamma)
        checked += 1
        if a.le(b.join(g)) != r.le(g):
            w = F.witnesses
            return Verification(False, checked, {"gamma": [f"{w[x]} = {w[y]}" for x, y in gamma]})
    return Verification(True, checked, detail="all principal Gamma")
