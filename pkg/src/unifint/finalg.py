"""Finite algebras and the constructions built on them.

An algebra has universe ``0..n-1`` and one flat int32 table per operation,
row-major by argument, so ``f(a, b)`` lives at ``table[a * n + b]``.
Free algebras of ``HSP(G)`` are computed as the subalgebra of a direct
power of ``G`` generated by the projections.
"""

from __future__ import annotations

import itertools
import json
import os
from functools import cached_property
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import BudgetExceeded, InputError, NotAHomomorphism, UnifintError
from .terms import App, Signature, Term, Var

DEFAULT_BUDGET = 200_000
# cap on the number of argument tuples materialised for one operation
TABLE_BUDGET = 1 << 25


def default_budget() -> int:
    env = os.environ.get("UNIFINT_BUDGET")
    if env:
        try:
            value = int(env)
        except ValueError:
            raise InputError(f"UNIFINT_BUDGET must be an integer, got {env!r}") from None
        if value <= 0:
            raise InputError("UNIFINT_BUDGET must be positive")
        return value
    return DEFAULT_BUDGET


def _arg_grid(n: int, k: int) -> np.ndarray:
    """All k-tuples over 0..n-1 in lexicographic order, shape (k, n**k)."""
    if n**k > TABLE_BUDGET:
        raise BudgetExceeded(f"{n}^{k} argument tuples exceed the table budget")
    if k == 0:
        return np.zeros((0, 1), dtype=np.int32)
    return np.indices((n,) * k, dtype=np.int32).reshape(k, -1)


class FiniteAlgebra:
    """A finite algebra with total operation tables.  Treated as immutable."""

    def __init__(self, sig: Signature, size: int, tables: Mapping[str, object], name: str = ""):
        if size < 1:
            raise InputError("algebra universe must be nonempty")
        self.sig = sig
        self.size = int(size)
        self.name = name
        self.tables: dict[str, np.ndarray] = {}
        for sym, k in sig.operations:
            if sym not in tables:
                raise InputError(f"missing table for operation {sym!r}")
            arr = np.asarray(tables[sym])
            if arr.size and not np.issubdtype(arr.dtype, np.integer):
                raise InputError(f"table for {sym!r} must contain integers")
            if arr.shape not in ((self.size,) * k, (self.size**k,)):
                raise InputError(
                    f"table for {sym!r} has shape {arr.shape}, expected {(self.size,) * k}"
                )
            flat = np.ascontiguousarray(arr.reshape(-1), dtype=np.int32)
            if flat.size and (flat.min() < 0 or flat.max() >= self.size):
                raise InputError(f"table for {sym!r} has entries outside 0..{self.size - 1}")
            flat.flags.writeable = False
            self.tables[sym] = flat
        extra = set(tables) - set(sig.symbols)
        if extra:
            raise InputError(f"tables for undeclared operations {sorted(extra)}")

    def __repr__(self):
        return f"FiniteAlgebra({self.name or self.sig.name!r}, size={self.size})"

    def __eq__(self, other):
        if not isinstance(other, FiniteAlgebra):
            return NotImplemented
        return (
            self.sig == other.sig
            and self.size == other.size
            and all(np.array_equal(self.tables[s], other.tables[s]) for s in self.sig.symbols)
        )

    def __hash__(self):
        return hash((self.sig, self.size, tuple(t.tobytes() for t in self.tables.values())))

    @property
    def elements(self) -> range:
        return range(self.size)

    def op(self, symbol: str, *args: int) -> int:
        table = self.tables[symbol]
        idx = 0
        for a in args:
            idx = idx * self.size + a
        return int(table[idx])

    def apply(self, symbol: str, args: Sequence[np.ndarray]) -> np.ndarray:
        """Vectorised operation on equal-length integer arrays."""
        table = self.tables[symbol]
        if not args:
            return table.copy()
        idx = np.zeros_like(np.asarray(args[0]), dtype=np.int64)
        for a in args:
            idx = idx * self.size + a
        return table[idx]

    def constant(self, symbol: str) -> int:
        return int(self.tables[symbol][0])

    @cached_property
    def translations(self) -> np.ndarray:
        """Matrix (n, R) whose columns are the distinct non-constant basic translations."""
        n = self.size
        cols = []
        for sym, k in self.sig.operations:
            if k == 0:
                continue
            if n**k > TABLE_BUDGET:
                raise BudgetExceeded(f"operation {sym!r} has too many argument tuples")
            t = self.tables[sym].reshape((n,) * k)
            for p in range(k):
                cols.append(np.moveaxis(t, p, -1).reshape(-1, n))
        if not cols:
            return np.zeros((n, 0), dtype=np.int32)
        rows = np.unique(np.concatenate(cols, axis=0), axis=0)
        rows = rows[(rows != rows[:, :1]).any(axis=1)]
        return np.ascontiguousarray(rows.T, dtype=np.int32)

    @cached_property
    def translation_generators(self) -> np.ndarray:
        """Columns of ``translations`` that generate the same monoid under composition.

        A relation closed under these is closed under every unary polynomial,
        so congruence closure may use this smaller set.
        """
        T = self.translations
        n, R = T.shape
        # the search composes every pair of columns
        if R <= 2 or R * R * n > 64 * TABLE_BUDGET:
            return T
        ident = np.arange(n)
        keep = ~(T == ident[:, None]).all(axis=0)
        weights = np.random.default_rng(0).integers(1, 1 << 62, size=n, dtype=np.int64)
        codes = T.T.astype(np.int64) @ weights
        where = {}
        for r, c in enumerate(codes.tolist()):
            where.setdefault(c, r)
        # facts[t] lists (s, r) with t = s after r
        facts: dict[int, list[tuple[int, int]]] = {}
        for s in range(R):
            comp = T[:, s][T]
            for r, c in enumerate((comp.T.astype(np.int64) @ weights).tolist()):
                t = where.get(c)
                if t is not None and t != s and t != r and np.array_equal(comp[:, r], T[:, t]):
                    facts.setdefault(t, []).append((s, r))
        # every dropped column is a composite of columns still kept when it was dropped
        for t in range(R - 1, -1, -1):
            if keep[t] and any(keep[s] and keep[r] for s, r in facts.get(t, ())):
                keep[t] = False
        return np.ascontiguousarray(T[:, keep])

    # --- serialisation -------------------------------------------------------

    def to_json(self, comment: str | None = None) -> dict:
        n = self.size
        tables = {}
        for sym, k in self.sig.operations:
            t = self.tables[sym]
            tables[sym] = int(t[0]) if k == 0 else t.reshape((n,) * k).tolist()
        d = {
            "name": self.name or self.sig.name,
            "signature": self.sig.to_json(),
            "size": n,
            "tables": tables,
        }
        if comment is not None:
            d["comment"] = comment
        return d

    @classmethod
    def from_json(cls, d: Mapping, allow_no_constants: bool = False) -> "FiniteAlgebra":
        if not isinstance(d, Mapping):
            raise InputError("algebra file must contain a JSON object")
        for key in ("name", "signature", "size", "tables"):
            if key not in d:
                raise InputError(f"algebra file lacks {key!r}")
        extra = set(d) - {"name", "signature", "size", "tables", "comment"}
        if extra:
            raise InputError(f"unexpected keys in algebra file: {sorted(extra)}")
        sig = Signature.from_json(d["name"], d["signature"], allow_no_constants)
        size = d["size"]
        if not isinstance(size, int) or isinstance(size, bool):
            raise InputError("size must be an integer")
        tables = d["tables"]
        if not isinstance(tables, Mapping):
            raise InputError("tables must be an object")
        parsed = {}
        for sym, k in sig.operations:
            if sym not in tables:
                raise InputError(f"missing table for operation {sym!r}")
            raw = tables[sym]
            if k == 0:
                if not isinstance(raw, int) or isinstance(raw, bool):
                    raise InputError(f"constant {sym!r} must be an integer")
                raw = [raw]
            parsed[sym] = _nested_table(raw, size, k, sym)
        for sym in tables:
            if sym not in sig:
                raise InputError(f"table given for undeclared operation {sym!r}")
        return cls(sig, size, parsed, name=d["name"])


def _nested_table(raw, n, k, sym):
    try:
        arr = np.array(raw)
    except ValueError:
        raise InputError(f"table for {sym!r} is ragged") from None
    want = (n,) * k if k else (1,)
    if arr.shape != want:
        raise InputError(f"table for {sym!r} has shape {arr.shape}, expected {want}")
    if arr.size and arr.dtype.kind not in "iu":
        raise InputError(f"table for {sym!r} must contain integers")
    return arr.reshape(-1)


def dumps_algebra(A: FiniteAlgebra, comment: str | None = None) -> str:
    return json.dumps(A.to_json(comment)) + "\n"


def loads_algebra(text: str, allow_no_constants: bool = False) -> FiniteAlgebra:
    try:
        d = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON: {exc}") from None
    return FiniteAlgebra.from_json(d, allow_no_constants)


def load_algebra(path, allow_no_constants: bool = False) -> FiniteAlgebra:
    with open(path, encoding="utf-8") as fh:
        return loads_algebra(fh.read(), allow_no_constants)


# --- homomorphisms -------------------------------------------------------------


def hom_violation(A: FiniteAlgebra, B: FiniteAlgebra, mapping) -> tuple | None:
    """First (op, args) where ``mapping`` fails to commute with an operation."""
    if A.sig != B.sig:
        raise InputError("homomorphism between algebras of different signatures")
    m = np.asarray(mapping, dtype=np.int32)
    if m.shape != (A.size,) or (m.size and (m.min() < 0 or m.max() >= B.size)):
        raise InputError("map must send every source element into the target")
    for sym, k in A.sig.operations:
        grid = _arg_grid(A.size, k)
        lhs = m[A.apply(sym, list(grid))]
        rhs = B.apply(sym, [m[g] for g in grid])
        if k == 0:
            lhs, rhs = lhs[:1], rhs[:1]
        bad = np.nonzero(lhs != rhs)[0]
        if bad.size:
            j = int(bad[0])
            return sym, tuple(int(g[j]) for g in grid)
    return None


class Homomorphism:
    def __init__(self, source: FiniteAlgebra, target: FiniteAlgebra, mapping, check: bool = True):
        self.source = source
        self.target = target
        m = np.ascontiguousarray(mapping, dtype=np.int32)
        if check:
            bad = hom_violation(source, target, m)
            if bad is not None:
                raise NotAHomomorphism(f"map does not preserve {bad[0]} at {bad[1]}")
        m.flags.writeable = False
        self.map = m

    def __call__(self, a: int) -> int:
        return int(self.map[a])

    def __repr__(self):
        return f"Homomorphism({self.source!r} -> {self.target!r}, {self.map.tolist()})"

    def __eq__(self, other):
        if not isinstance(other, Homomorphism):
            return NotImplemented
        return (
            self.source == other.source
            and self.target == other.target
            and np.array_equal(self.map, other.map)
        )

    def __hash__(self):
        return hash(self.map.tobytes())

    def is_injective(self) -> bool:
        return len(np.unique(self.map)) == self.source.size

    def is_surjective(self) -> bool:
        return len(np.unique(self.map)) == self.target.size

    def kernel_rep(self) -> np.ndarray:
        """Canonical least-representative partition of ``ker h``."""
        _, first, inv = np.unique(self.map, return_index=True, return_inverse=True)
        return first[inv.reshape(-1)].astype(np.int32)

    def compose(self, other: "Homomorphism") -> "Homomorphism":
        """``other`` after ``self``."""
        if self.target != other.source:
            raise InputError("composing homomorphisms with mismatched domains")
        return Homomorphism(self.source, other.target, other.map[self.map], check=False)

    @classmethod
    def identity(cls, A: FiniteAlgebra) -> "Homomorphism":
        return cls(A, A, np.arange(A.size), check=False)


# --- powers and products -------------------------------------------------------


class DirectPower:
    """``A ** exponent`` with elements as index tuples; tables built on demand."""

    def __init__(self, base: FiniteAlgebra, exponent: int, budget: int | None = None):
        if exponent < 1:
            raise InputError("exponent must be positive")
        budget = budget or default_budget()
        self.base = base
        self.exponent = exponent
        self.size = base.size**exponent
        if self.size > budget:
            raise BudgetExceeded(f"{base.size}^{exponent} elements exceed the budget {budget}")
        self.sig = base.sig

    def element(self, index: int) -> tuple[int, ...]:
        digits = []
        for _ in range(self.exponent):
            index, d = divmod(index, self.base.size)
            digits.append(d)
        return tuple(reversed(digits))

    def index(self, element: Sequence[int]) -> int:
        idx = 0
        for d in element:
            idx = idx * self.base.size + d
        return idx

    def op(self, symbol: str, *args: int) -> int:
        coords = [self.element(a) for a in args]
        return self.index(
            tuple(self.base.op(symbol, *(c[i] for c in coords)) for i in range(self.exponent))
        )

    def to_algebra(self) -> FiniteAlgebra:
        return direct_product([self.base] * self.exponent, name=f"{self.base.name}^{self.exponent}")


def direct_power(A: FiniteAlgebra, exponent: int, budget: int | None = None) -> DirectPower:
    return DirectPower(A, exponent, budget)


def direct_product(algebras: Sequence[FiniteAlgebra], name: str | None = None) -> FiniteAlgebra:
    """Product with elements ordered lexicographically by coordinate tuple."""
    if not algebras:
        raise InputError("empty product")
    sig = algebras[0].sig
    if any(B.sig != sig for B in algebras):
        raise InputError("product factors must share a signature")
    sizes = [B.size for B in algebras]
    n = int(np.prod(sizes))
    coords = np.indices(sizes, dtype=np.int32).reshape(len(sizes), -1)
    tables = {}
    for sym, k in sig.operations:
        grid = _arg_grid(n, k)
        out = np.zeros(grid.shape[1] if k else 1, dtype=np.int64)
        for f, B in enumerate(algebras):
            vals = B.apply(sym, [coords[f][g] for g in grid]) if k else B.tables[sym]
            out = out * B.size + vals
        tables[sym] = out
    return FiniteAlgebra(sig, n, tables, name=name or "x".join(B.name for B in algebras))


# --- closure --------------------------------------------------------------------


def _row_codes(rows: np.ndarray, base: int):
    """Integer code per row when it fits in int64, else bytes keys."""
    width = rows.shape[1]
    if width * np.log2(max(base, 2)) < 62:
        weights = base ** np.arange(width - 1, -1, -1, dtype=np.int64)
        return rows.astype(np.int64) @ weights
    return [r.tobytes() for r in rows]


class Closure:
    """Result of a breadth-first closure under the operations.

    ``values`` has one row per discovered element (in discovery order) and
    ``derivations[i]`` is ``("gen", j)``, ``("const", sym)`` or
    ``(sym, child_indices)``.
    """

    def __init__(self, values, witnesses, derivations):
        self.values = values
        self.witnesses = witnesses
        self.derivations = derivations

    def __len__(self):
        return len(self.witnesses)


def _closure(sig: Signature, start, start_terms, apply, base: int, budget: int) -> Closure:
    """Breadth-first closure; witnesses are first found in (symbol, child) order."""
    rows: list[np.ndarray] = []
    terms: list[Term] = []
    derivs: list[tuple] = []
    seen: dict = {}

    def add(row, term, deriv):
        key = row.tobytes()
        if key in seen:
            return False
        seen[key] = len(rows)
        rows.append(row)
        terms.append(term)
        derivs.append(deriv)
        if len(rows) > budget:
            raise BudgetExceeded(f"subuniverse exceeds the element budget {budget}")
        return True

    for j, (row, term) in enumerate(zip(start, start_terms)):
        add(np.ascontiguousarray(row), term, ("gen", j))
    for sym in sig.constants:
        add(np.ascontiguousarray(apply(sym, [])[0]), App(sym), ("const", sym))
    if not rows:
        raise UnifintError("closure of the empty set in a signature without constants")

    ops = sorted((s, k) for s, k in sig.operations if k > 0)
    prev = 0
    while True:
        K = len(rows)
        if K == prev:
            break
        V = np.stack(rows)
        found = []
        for sym, k in ops:
            if K**k > TABLE_BUDGET:
                raise BudgetExceeded(f"closure step for {sym!r} exceeds the table budget")
            grid = np.indices((K,) * k, dtype=np.int32).reshape(k, -1)
            if prev:
                grid = grid[:, (grid >= prev).any(axis=0)]
            if grid.shape[1] == 0:
                continue
            res = np.ascontiguousarray(apply(sym, [V[g] for g in grid]))
            codes = _row_codes(res, base)
            if isinstance(codes, np.ndarray):
                _, first = np.unique(codes, return_index=True)
            else:
                firsts = {}
                for i, c in enumerate(codes):
                    firsts.setdefault(c, i)
                first = np.fromiter(firsts.values(), dtype=np.int64)
            for i in np.sort(first):
                found.append((res[i], sym, tuple(int(g) for g in grid[:, i])))
        prev = K
        for row, sym, kids in found:
            add(row, None, (sym, kids))
            if terms[-1] is None:
                terms[-1] = App(sym, tuple(terms[c] for c in kids))
    return Closure(np.stack(rows), terms, derivs)


class Subuniverse:
    def __init__(self, elements: tuple[int, ...], witnesses: tuple[Term, ...], derivations):
        self.elements = elements
        self.witnesses = witnesses
        self.derivations = derivations

    @property
    def universe(self) -> frozenset[int]:
        return frozenset(self.elements)

    def witness(self, a: int) -> Term:
        return self.witnesses[self.elements.index(a)]

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter((self.universe, dict(zip(self.elements, self.witnesses))))


def generated_subalgebra(
    A: FiniteAlgebra,
    gens: Iterable[int],
    labels: Sequence[Term] | None = None,
    budget: int | None = None,
) -> Subuniverse:
    """Least subuniverse containing ``gens`` and the constants.

    Unpacks as ``(universe, witnesses)``.
    """
    gens = [int(g) for g in gens]
    for g in gens:
        if not 0 <= g < A.size:
            raise InputError(f"generator {g} is not an element")
    if labels is None:
        labels = [Var(f"e{g}") for g in gens]
    if not gens and not A.sig.has_constants:
        raise UnifintError("refusing to close the empty set: signature has no constants")

    def apply(sym, args):
        if not args:
            return A.tables[sym].reshape(1, 1)
        return A.apply(sym, [a[:, 0] for a in args]).reshape(-1, 1)

    start = [np.array([g], dtype=np.int32) for g in gens]
    cl = _closure(A.sig, start, list(labels), apply, A.size, budget or default_budget())
    return Subuniverse(
        tuple(int(v) for v in cl.values[:, 0]), tuple(cl.witnesses), tuple(cl.derivations)
    )


def subalgebra(A: FiniteAlgebra, universe: Iterable[int]) -> tuple[FiniteAlgebra, Homomorphism]:
    """The subalgebra on a subuniverse, re-indexed in increasing order, and its inclusion."""
    elems = sorted(set(int(a) for a in universe))
    pos = np.full(A.size, -1, dtype=np.int64)
    pos[elems] = np.arange(len(elems))
    sub = np.array(elems, dtype=np.int32)
    n = len(elems)
    tables = {}
    for sym, k in A.sig.operations:
        grid = _arg_grid(n, k)
        vals = A.apply(sym, [sub[g] for g in grid]) if k else A.tables[sym]
        mapped = pos[vals]
        if (mapped < 0).any():
            raise InputError("not a subuniverse: not closed under " + sym)
        tables[sym] = mapped
    B = FiniteAlgebra(A.sig, n, tables, name=f"sub({A.name})")
    return B, Homomorphism(B, A, sub, check=False)


def generating_set(A: FiniteAlgebra) -> list[int]:
    """Greedy generating set: scan elements in order, keep those not yet generated."""
    gens: list[int] = []
    have = generated_subalgebra(A, gens, budget=A.size).universe if A.sig.has_constants else set()
    for a in range(A.size):
        if a not in have:
            gens.append(a)
            have = generated_subalgebra(A, gens, budget=A.size).universe
    return gens


# --- free algebras --------------------------------------------------------------


class FreeAlgebra:
    """``F(vars)`` in ``HSP(G)`` as tuples indexed by assignments ``vars -> G``.

    Assignments are enumerated lexicographically with the first variable most
    significant; ``tuples[e, p]`` is the value of element ``e`` under
    assignment ``p``.
    """

    def __init__(self, generator, vars, tuples, witnesses, derivations, algebra):
        self.generator = generator
        self.vars = tuple(vars)
        self.tuples = tuples
        self.witnesses = tuple(witnesses)
        self.derivations = tuple(derivations)
        self.algebra = algebra

    @property
    def size(self) -> int:
        return self.algebra.size

    def __repr__(self):
        return f"FreeAlgebra({self.generator.name}, vars={list(self.vars)}, size={self.size})"

    @cached_property
    def assignments(self) -> np.ndarray:
        g, k = self.generator.size, len(self.vars)
        if k == 0:
            return np.zeros((1, 0), dtype=np.int32)
        return np.indices((g,) * k, dtype=np.int32).reshape(k, -1).T

    def generator_element(self, var: str) -> int:
        return self.vars.index(var)

    def element_of(self, t: Term) -> int:
        from .terms import evaluate

        return evaluate(t, self.algebra, {v: i for i, v in enumerate(self.vars)})

    def pair_of(self, eq) -> tuple[int, int]:
        return self.element_of(eq.lhs), self.element_of(eq.rhs)

    def assignment_index(self, assignment: Mapping[str, int]) -> int:
        idx = 0
        for v in self.vars:
            idx = idx * self.generator.size + assignment[v]
        return idx

    def extension(self, assignment: Mapping[str, int]) -> Homomorphism:
        """The unique homomorphism ``F(vars) -> G`` extending an assignment."""
        p = self.assignment_index(assignment)
        return Homomorphism(self.algebra, self.generator, self.tuples[:, p], check=False)


def free_algebra(G, vars: Sequence[str], budget: int | None = None) -> FreeAlgebra:
    """Free algebra of ``HSP(G)`` on ``vars``; a list of generators is folded into their product."""
    if isinstance(G, (list, tuple)):
        G = G[0] if len(G) == 1 else direct_product(list(G))
    vars = tuple(vars)
    if len(set(vars)) != len(vars):
        raise InputError(f"duplicate variables {vars}")
    for v in vars:
        if v in G.sig:
            raise InputError(f"variable {v!r} clashes with an operation symbol")
    budget = budget or default_budget()
    g, k = G.size, len(vars)
    if not k and not G.sig.has_constants:
        raise UnifintError("refusing to build F(empty set): signature has no constants")
    if g**k > budget:
        raise BudgetExceeded(f"{g}^{k} assignment coordinates exceed the budget {budget}")
    m = g**k
    if k:
        assign = np.indices((g,) * k, dtype=np.int32).reshape(k, -1)
    else:
        assign = np.zeros((0, 1), dtype=np.int32)

    def apply(sym, args):
        if not args:
            return np.full((1, m), G.constant(sym), dtype=np.int32)
        return G.apply(sym, args)

    cl = _closure(G.sig, [assign[j] for j in range(k)], [Var(v) for v in vars], apply, g, budget)
    tuples = np.ascontiguousarray(cl.values, dtype=np.int32)
    tuples.flags.writeable = False
    algebra = FiniteAlgebra(G.sig, len(cl), _tuple_tables(G, tuples), name=f"F({','.join(vars)})")
    return FreeAlgebra(G, vars, tuples, cl.witnesses, cl.derivations, algebra)


def _index_lookup(tuples, base):
    codes = _row_codes(tuples, base)
    if isinstance(codes, np.ndarray):
        order = np.argsort(codes)
        sorted_codes = codes[order]

        def lookup(rows):
            c = _row_codes(rows, base)
            pos = np.searchsorted(sorted_codes, c)
            pos = np.minimum(pos, len(sorted_codes) - 1)
            if not np.array_equal(sorted_codes[pos], c):
                raise UnifintError("tuple outside the computed subuniverse")
            return order[pos]

        return lookup
    index = {c: i for i, c in enumerate(codes)}

    def lookup(rows):
        try:
            return np.array([index[r.tobytes()] for r in rows], dtype=np.int64)
        except KeyError:
            raise UnifintError("tuple outside the computed subuniverse") from None

    return lookup


def _tuple_tables(G, tuples):
    N = tuples.shape[0]
    lookup = _index_lookup(tuples, G.size)
    tables = {}
    for sym, k in G.sig.operations:
        if k == 0:
            row = np.full((1, tuples.shape[1]), G.constant(sym), dtype=np.int32)
            tables[sym] = lookup(row)
            continue
        grid = _arg_grid(N, k)
        res = G.apply(sym, [tuples[g] for g in grid])
        tables[sym] = lookup(np.ascontiguousarray(res))
    return tables


def position_map(small: FreeAlgebra, big: FreeAlgebra) -> np.ndarray:
    """For each assignment of ``big.vars``, the index of its restriction to ``small.vars``."""
    missing = set(small.vars) - set(big.vars)
    if missing:
        raise InputError(f"variables {sorted(missing)} are not in {big.vars}")
    g = big.generator.size
    A = big.assignments
    q = np.zeros(A.shape[0], dtype=np.int64)
    for v in small.vars:
        q = q * g + A[:, big.vars.index(v)]
    return q


def inclusion(small: FreeAlgebra, big: FreeAlgebra) -> Homomorphism:
    """``F(ybar) -> F(xbar, ybar)`` induced by ``ybar`` being a subset of the big variables."""
    if small.generator != big.generator:
        raise InputError("free algebras over different generators")
    q = position_map(small, big)
    rows = np.ascontiguousarray(small.tuples[:, q])
    mapping = _index_lookup(big.tuples, big.generator.size)(rows)
    return Homomorphism(small.algebra, big.algebra, mapping, check=False)


# --- quotients and homomorphism search -----------------------------------------------


def quotient(A: FiniteAlgebra, theta) -> tuple[FiniteAlgebra, Homomorphism]:
    """``A / theta`` with blocks numbered by least element, and the projection."""
    rep = np.asarray(theta.rep, dtype=np.int64)
    reps = np.unique(rep)
    block = np.full(A.size, -1, dtype=np.int64)
    block[reps] = np.arange(len(reps))
    proj = block[rep]
    n = len(reps)
    tables = {}
    for sym, k in A.sig.operations:
        grid = _arg_grid(n, k)
        vals = A.apply(sym, [reps[g] for g in grid]) if k else A.tables[sym]
        tables[sym] = proj[vals]
    Q = FiniteAlgebra(A.sig, n, tables, name=f"{A.name}/theta")
    return Q, Homomorphism(A, Q, proj)


def all_homomorphisms(A: FiniteAlgebra, B: FiniteAlgebra, limit: int = 10_000):
    """All homomorphisms ``A -> B`` up to ``limit``; returns ``(homs, truncated)``.

    Only generator images are searched; everything else follows from the
    derivation of each element.
    """
    if A.sig != B.sig:
        raise InputError("algebras of different signatures")
    gens = generating_set(A)
    sub = generated_subalgebra(A, gens, budget=A.size)
    homs = []
    for images in itertools.product(range(B.size), repeat=len(gens)):
        m = np.empty(A.size, dtype=np.int32)
        for a, d in zip(sub.elements, sub.derivations):
            if d[0] == "gen":
                m[a] = images[d[1]]
            elif d[0] == "const":
                m[a] = B.constant(d[1])
            else:
                m[a] = B.op(d[0], *(int(m[sub.elements[c]]) for c in d[1]))
        if hom_violation(A, B, m) is None:
            if len(homs) >= limit:
                return homs, True
            homs.append(Homomorphism(A, B, m, check=False))
    return homs, False
