"""Axioms for the model completion of a locally finite variety, and instance checks.

An axiom is indexed by ``(Gamma, Delta_1..Delta_n, x)`` over variables
``xs``, with ``zs = xs - {x}``.  ``Sigma(zs)`` generates the pull-back of
``cg(Gamma)`` along ``i : F(zs) -> F(xs)``, and ``Pi_m(zs)`` generates the
left adjoint of ``i*`` at the residual ``cg(Delta_m) - cg(Gamma)``.  The
axiom reads::

    phi(Sigma, Pi_1..Pi_n) -> exists x . phi(Gamma, Delta_1..Delta_n)

where ``phi(E, D_1..D_n)`` is the conjunction of ``E`` and of the
negations of each ``D_m``.

The first-order step that passes from these axioms to a complete theory
uses compactness and has no computational counterpart here.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .congr import Congruence, residual_in_ideal
from .errors import NotInVariety, PreconditionFailed, ResidualMissing, UnifintError, UnsupportedCase
from .finalg import FiniteAlgebra, Homomorphism, direct_product, generating_set, hom_violation, quotient
from .interp import VarietyEngine, _merge_vars
from .lattice import Verdict
from .lifting import direct_image, inverse_image, left_adjoint_of_compact_lifting
from .terms import Equation, EquationSet, evaluate

# --- formulas -------------------------------------------------------------------


@dataclass(frozen=True)
class EqAtom:
    eq: Equation


@dataclass(frozen=True)
class Conj:
    parts: tuple = ()


@dataclass(frozen=True)
class Not:
    body: Conj


@dataclass(frozen=True)
class Exists:
    var: str
    body: Conj


@dataclass(frozen=True)
class Implies:
    ante: Conj
    cons: Exists


def phi(eqs: EquationSet, negated: Sequence[EquationSet] = ()) -> Conj:
    """``phi(E, D_1..D_n)``; an empty ``E`` is dropped when negations follow."""
    parts = [EqAtom(e) for e in eqs]
    parts += [Not(Conj(tuple(EqAtom(e) for e in d))) for d in negated]
    return Conj(tuple(parts))


def _atom(a: EqAtom) -> str:
    return f"({a.eq})"


def _part(p) -> str:
    if isinstance(p, EqAtom):
        return _atom(p)
    inner = p.body.parts
    if not inner:
        return "~ true"
    if len(inner) == 1:
        return "~ " + _atom(inner[0])
    return "~ (" + " & ".join(_atom(a) for a in inner) + ")"


def format_conj(c: Conj) -> str:
    if not c.parts:
        return "true"
    text = " & ".join(_part(p) for p in c.parts)
    compound = len(c.parts) > 1 or any(isinstance(p, Not) for p in c.parts)
    return f"({text})" if compound else text


def format_formula(f) -> str:
    if isinstance(f, Implies):
        return f"{format_conj(f.ante)} -> {format_formula(f.cons)}"
    if isinstance(f, Exists):
        return f"exists {f.var} . {format_conj(f.body)}"
    if isinstance(f, Conj):
        return format_conj(f)
    raise TypeError(f"not a formula: {f!r}")


def holds(f, A: FiniteAlgebra, assignment: Mapping[str, int]) -> bool:
    """Truth of a formula in ``A`` under an assignment."""
    if isinstance(f, EqAtom):
        return evaluate(f.eq.lhs, A, assignment) == evaluate(f.eq.rhs, A, assignment)
    if isinstance(f, Conj):
        return all(holds(p, A, assignment) for p in f.parts)
    if isinstance(f, Not):
        return not holds(f.body, A, assignment)
    if isinstance(f, Exists):
        env = dict(assignment)
        for a in range(A.size):
            env[f.var] = a
            if holds(f.body, A, env):
                return True
        return False
    if isinstance(f, Implies):
        return not holds(f.ante, A, assignment) or holds(f.cons, A, assignment)
    raise TypeError(f"not a formula: {f!r}")


# --- axiom data -------------------------------------------------------------------


@dataclass(frozen=True)
class AxiomDatum:
    gamma: EquationSet
    deltas: tuple[EquationSet, ...]
    x: str
    sigma: EquationSet
    pis: tuple[EquationSet, ...]

    @property
    def xs(self) -> tuple[str, ...]:
        return _merge_vars(self.gamma.vars, *(d.vars for d in self.deltas), [self.x])

    @property
    def zs(self) -> tuple[str, ...]:
        return tuple(v for v in self.xs if v != self.x)

    def quantified(self) -> Conj:
        return phi(self.gamma, self.deltas)

    def eliminated(self) -> Conj:
        return phi(self.sigma, self.pis)

    def to_json(self):
        return {
            "x": self.x,
            "zs": list(self.zs),
            "gamma": [str(e) for e in self.gamma],
            "deltas": [[str(e) for e in d] for d in self.deltas],
            "sigma": [str(e) for e in self.sigma],
            "pis": [[str(e) for e in p] for p in self.pis],
        }


def build_axiom_datum(
    V: VarietyEngine, gamma: EquationSet, deltas: Sequence[EquationSet], x: str
) -> AxiomDatum:
    """Compute ``Sigma`` and each ``Pi_m`` for the index ``(Gamma, Deltas, x)``.

    Residuals are computed in the ideal below ``cg(Delta_m)``; they coincide
    with residuals in all of ``Con F(xs)`` because ``V`` is assumed
    congruence distributive.
    """
    for e in (gamma, *deltas):
        e.check(V.sig)
    xs = _merge_vars(gamma.vars, *(d.vars for d in deltas), [x])
    zs = tuple(v for v in xs if v != x)
    F = V.free(xs)
    i = V.inclusion(zs, xs)
    th_gamma = V.theta(xs, gamma)
    sigma = V.generators_of(zs, inverse_image(i, th_gamma))
    pis = []
    L_z = V.con(zs) if deltas else None
    for m, d in enumerate(deltas, 1):
        th_d = V.theta(xs, d)
        r = residual_in_ideal(F.algebra, th_d, th_gamma)
        if r is None:
            raise ResidualMissing(f"cg(Delta_{m}) - cg(Gamma) does not exist", witness={"delta": m})
        la = left_adjoint_of_compact_lifting(i, r, L_z)
        if not la.exists:
            raise UnifintError(f"no left adjoint at the residual for Delta_{m}")
        pis.append(V.generators_of(zs, la.value))
    datum = AxiomDatum(gamma.with_vars(xs), tuple(d.with_vars(xs) for d in deltas), x, sigma, tuple(pis))
    _check_datum(V, datum)
    return datum


def _check_datum(V: VarietyEngine, d: AxiomDatum):
    xs, zs = d.xs, d.zs
    i = V.inclusion(zs, xs)
    th_gamma = V.theta(xs, d.gamma)
    if V.theta(zs, d.sigma) != inverse_image(i, th_gamma):
        raise UnifintError("Sigma does not generate the pulled-back congruence")
    for m, (delta, pi) in enumerate(zip(d.deltas, d.pis), 1):
        th_pi = V.theta(zs, pi)
        r = residual_in_ideal(V.free(xs).algebra, V.theta(xs, delta), th_gamma)
        # least psi with r <= i*(psi)
        if not r.le(direct_image(i, th_pi)):
            raise UnifintError(f"Pi_{m} is too weak")


def emit_axiom(d: AxiomDatum) -> tuple[Implies, str]:
    f = Implies(d.eliminated(), Exists(d.x, d.quantified()))
    return f, format_formula(f)


# --- models -------------------------------------------------------------------------


def in_variety(V: VarietyEngine, A: FiniteAlgebra) -> Verdict:
    """``A`` is in ``HSP(G)`` iff the free algebra on a generating set of ``A`` maps onto it."""
    if A.sig != V.sig:
        return Verdict(False, "signature differs")
    gens = generating_set(A)
    names = tuple(f"g{j}" for j in range(len(gens)))
    F = V.free(names)
    env = dict(zip(names, gens))
    mapping = np.array([evaluate(w, A, env) for w in F.witnesses], dtype=np.int32)
    bad = hom_violation(F.algebra, A, mapping)
    if bad is None:
        return Verdict(True)
    sym, args = bad
    w = F.witnesses
    return Verdict(False, {"operation": sym, "arguments": [str(w[a]) for a in args]})


def default_models(V: VarietyEngine, d: AxiomDatum) -> list[FiniteAlgebra]:
    """``G``, ``G^2`` and every quotient of ``F(zs)``."""
    models = [V.G, direct_product([V.G, V.G], name=f"{V.G.name}^2")]
    F = V.free(d.zs).algebra
    for theta in V.con(d.zs):
        Q, _ = quotient(F, theta)
        models.append(Q)
    return models


def verify_quantelim_direction(V: VarietyEngine, d: AxiomDatum, models: Sequence[FiniteAlgebra] | None = None) -> Verdict:
    """In every model, ``exists x . phi(Gamma, Deltas)`` implies ``phi(Sigma, Pis)``."""
    models = default_models(V, d) if models is None else list(models)
    body, elim = d.quantified(), d.eliminated()
    ex = Exists(d.x, body)
    for A in models:
        member = in_variety(V, A)
        if not member:
            raise NotInVariety(f"model {A.name} is not in the variety: {member.witness}")
        for vals in itertools.product(range(A.size), repeat=len(d.zs)):
            env = dict(zip(d.zs, vals))
            if holds(ex, A, env) and not holds(elim, A, env):
                return Verdict(False, {"model": A.name, "assignment": env})
    return Verdict(True)


@dataclass(frozen=True)
class Extension:
    """``A = F(xs)/theta`` with an embedding of ``A'`` and a witness for ``x``."""

    algebra: FiniteAlgebra
    embedding: Homomorphism
    witness: int
    assignment: dict

    def to_json(self):
        return {
            "size": self.algebra.size,
            "embedding": self.embedding.map.tolist(),
            "x": self.witness,
            "assignment": self.assignment,
        }


def verify_cotheory_instance(
    V: VarietyEngine, d: AxiomDatum, A1: FiniteAlgebra, f1: Mapping[str, int]
) -> Extension:
    """Build an extension of ``A1`` in which ``exists x . phi(Gamma, Deltas)`` holds at ``f1``.

    Only the case where ``f1`` generates ``A1`` is handled; the general case
    needs an amalgam and is rejected with ``UnsupportedCase``.
    """
    member = in_variety(V, A1)
    if not member:
        raise NotInVariety(f"{A1.name} is not in the variety: {member.witness}")
    zs, xs = d.zs, d.xs
    missing = set(zs) - set(f1)
    if missing:
        raise PreconditionFailed(f"assignment misses {sorted(missing)}")
    env = {v: int(f1[v]) for v in zs}
    if not holds(d.eliminated(), A1, env):
        raise PreconditionFailed("the assignment does not satisfy phi(Sigma, Pis)")
    Fz = V.free(zs)
    fhat = np.array([evaluate(w, A1, env) for w in Fz.witnesses], dtype=np.int32)
    h = Homomorphism(Fz.algebra, A1, fhat)
    if not h.is_surjective():
        raise UnsupportedCase("the assignment does not generate the algebra; only the generated case is built")
    ker = Congruence.from_rep(Fz.algebra, h.kernel_rep())
    i = V.inclusion(zs, xs)
    theta = V.theta(xs, d.gamma).join(direct_image(i, ker))
    if inverse_image(i, theta) != ker:
        raise UnifintError("pulled-back congruence differs from the kernel")
    A, p = quotient(V.free(xs).algebra, theta)
    # iota(a') = p(i(b)) for any b with fhat(b) = a'
    pre = np.full(A1.size, -1, dtype=np.int64)
    for b in range(Fz.size - 1, -1, -1):
        pre[fhat[b]] = b
    iota = Homomorphism(A1, A, p.map[i.map[pre]])
    if not iota.is_injective():
        raise UnifintError("constructed map is not injective")
    F = V.free(xs)
    x_val = int(p.map[F.generator_element(d.x)])
    full_env = {v: int(iota.map[env[v]]) for v in zs}
    full_env[d.x] = x_val
    if not holds(d.quantified(), A, full_env):
        raise UnifintError("the extended assignment does not satisfy phi(Gamma, Deltas)")
    return Extension(A, iota, x_val, full_env)
