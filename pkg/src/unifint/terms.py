"""Signatures, terms, and equations in prefix functional notation.

Grammar::

    eq   := term "=" term
    term := IDENT | IDENT "(" term ("," term)* ")"

Whitespace is insignificant.  Constants may be written bare (``top``) or
with empty parentheses (``top()``).
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence, Union

from .errors import (
    ArityError,
    InputError,
    TermSyntaxError,
    UnassignedVariable,
    UnknownSymbolError,
)

IDENT_RE = re.compile(r"[a-zA-Z_][a-zA-Z0-9_]*")


@dataclass(frozen=True)
class Signature:
    name: str = field(compare=False)
    operations: tuple[tuple[str, int], ...]
    allow_no_constants: bool = field(default=False, compare=False)

    def __post_init__(self):
        ops = tuple((str(s), int(k)) for s, k in self.operations)
        object.__setattr__(self, "operations", ops)
        seen = set()
        for sym, arity in ops:
            if not IDENT_RE.fullmatch(sym):
                raise InputError(f"bad operation symbol {sym!r}")
            if arity < 0:
                raise InputError(f"negative arity for {sym!r}")
            if sym in seen:
                raise InputError(f"duplicate operation symbol {sym!r}")
            seen.add(sym)
        if not self.allow_no_constants and not any(k == 0 for _, k in ops):
            raise InputError(
                f"signature {self.name!r} has no constant symbol; "
                "pass allow_no_constants to load it anyway"
            )

    @property
    def has_constants(self) -> bool:
        return any(k == 0 for _, k in self.operations)

    @property
    def symbols(self) -> tuple[str, ...]:
        return tuple(s for s, _ in self.operations)

    @property
    def constants(self) -> tuple[str, ...]:
        return tuple(s for s, k in self.operations if k == 0)

    def arity(self, symbol: str) -> int:
        for s, k in self.operations:
            if s == symbol:
                return k
        raise UnknownSymbolError(f"unknown operation symbol {symbol!r}")

    def __contains__(self, symbol) -> bool:
        return any(s == symbol for s, _ in self.operations)

    def to_json(self) -> list:
        return [{"op": s, "arity": k} for s, k in self.operations]

    @classmethod
    def from_json(cls, name, items, allow_no_constants=False) -> "Signature":
        try:
            ops = tuple((d["op"], d["arity"]) for d in items)
        except (KeyError, TypeError) as exc:
            raise InputError(f"malformed signature entry: {exc}") from None
        return cls(name, ops, allow_no_constants=allow_no_constants)


@dataclass(frozen=True)
class Var:
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class App:
    symbol: str
    args: tuple["Term", ...] = ()

    def __str__(self):
        if not self.args:
            return self.symbol
        return f"{self.symbol}({', '.join(map(str, self.args))})"


Term = Union[Var, App]


def variables(t: Term) -> set[str]:
    if isinstance(t, Var):
        return {t.name}
    out: set[str] = set()
    for a in t.args:
        out |= variables(a)
    return out


def depth(t: Term) -> int:
    if isinstance(t, Var) or not t.args:
        return 0
    return 1 + max(depth(a) for a in t.args)


def check_term(t: Term, sig: Signature) -> None:
    if isinstance(t, Var):
        if t.name in sig:
            raise InputError(f"variable {t.name!r} clashes with an operation symbol")
        return
    k = sig.arity(t.symbol)
    if k != len(t.args):
        raise ArityError(f"{t.symbol} takes {k} arguments, got {len(t.args)}")
    for a in t.args:
        check_term(a, sig)


@dataclass(frozen=True)
class Equation:
    lhs: Term
    rhs: Term

    def __str__(self):
        return f"{self.lhs} = {self.rhs}"

    @property
    def variables(self) -> set[str]:
        return variables(self.lhs) | variables(self.rhs)


@dataclass(frozen=True)
class EquationSet:
    """Finitely many equations over a declared, ordered variable list.

    The declared list may contain variables no equation mentions.
    """

    equations: tuple[Equation, ...]
    vars: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "equations", tuple(self.equations))
        object.__setattr__(self, "vars", tuple(self.vars))
        if len(set(self.vars)) != len(self.vars):
            raise InputError(f"duplicate declared variables in {self.vars}")
        declared = set(self.vars)
        for e in self.equations:
            missing = e.variables - declared
            if missing:
                raise InputError(
                    f"equation {e} uses undeclared variables {sorted(missing)}"
                )

    def __iter__(self):
        return iter(self.equations)

    def __len__(self):
        return len(self.equations)

    def check(self, sig: Signature) -> None:
        for v in self.vars:
            if v in sig:
                raise InputError(f"variable {v!r} clashes with an operation symbol")
        for e in self.equations:
            check_term(e.lhs, sig)
            check_term(e.rhs, sig)

    def with_vars(self, vars: Sequence[str]) -> "EquationSet":
        return EquationSet(self.equations, tuple(vars))

    def __str__(self):
        return "{" + ", ".join(map(str, self.equations)) + "}"

    def to_text(self) -> str:
        lines = [f"vars: {', '.join(self.vars)}"]
        lines += [str(e) for e in self.equations]
        return "\n".join(lines) + "\n"


Substitution = Mapping[str, Term]


def substitute(t: Term, s: Substitution) -> Term:
    """Simultaneous substitution; unmapped variables stay put."""
    if isinstance(t, Var):
        return s.get(t.name, t)
    if not t.args:
        return t
    return App(t.symbol, tuple(substitute(a, s) for a in t.args))


def evaluate(t: Term, algebra, assignment: Mapping[str, int]) -> int:
    if isinstance(t, Var):
        try:
            return assignment[t.name]
        except KeyError:
            raise UnassignedVariable(f"variable {t.name!r} is not assigned") from None
    return algebra.op(t.symbol, *(evaluate(a, algebra, assignment) for a in t.args))


# --- parsing -----------------------------------------------------------------

_TOKEN_RE = re.compile(r"\s*(?:([a-zA-Z_][a-zA-Z0-9_]*)|(.))")


def _tokenize(text: str):
    pos = 0
    toks = []
    n = len(text)
    while pos < n:
        m = _TOKEN_RE.match(text, pos)
        if m is None or m.end() == pos:
            break
        if m.group(1) is not None:
            toks.append(("IDENT", m.group(1), m.start(1)))
        elif m.group(2) is not None:
            ch = m.group(2)
            if ch not in "(),=":
                raise TermSyntaxError(f"unexpected character {ch!r}", m.start(2))
            toks.append((ch, ch, m.start(2)))
        pos = m.end()
    toks.append(("EOF", "", len(text)))
    return toks


class _Parser:
    def __init__(self, text, sig, vars):
        self.toks = _tokenize(text)
        self.i = 0
        self.sig = sig
        self.vars = None if vars is None else set(vars)

    def peek(self):
        return self.toks[self.i]

    def take(self, kind, expected):
        tok = self.toks[self.i]
        if tok[0] != kind:
            got = tok[1] or "end of input"
            raise TermSyntaxError(f"unexpected {got!r}", tok[2], expected)
        self.i += 1
        return tok

    def term(self) -> Term:
        _, name, pos = self.take("IDENT", "identifier")
        if self.peek()[0] == "(":
            if name not in self.sig:
                raise UnknownSymbolError(f"unknown operation symbol {name!r} at position {pos}")
            self.i += 1
            args = []
            if self.peek()[0] != ")":
                args.append(self.term())
                while self.peek()[0] == ",":
                    self.i += 1
                    args.append(self.term())
            self.take(")", "',' or ')'")
            k = self.sig.arity(name)
            if k != len(args):
                raise ArityError(
                    f"{name} takes {k} arguments, got {len(args)} at position {pos}"
                )
            return App(name, tuple(args))
        if name in self.sig:
            k = self.sig.arity(name)
            if k != 0:
                raise ArityError(f"{name} takes {k} arguments, got 0 at position {pos}")
            return App(name)
        if self.vars is not None and name not in self.vars:
            raise UnknownSymbolError(f"unknown identifier {name!r} at position {pos}")
        return Var(name)

    def end(self):
        self.take("EOF", "end of input")


def parse_term(text: str, sig: Signature, vars: Iterable[str] | None = None) -> Term:
    p = _Parser(text, sig, vars)
    t = p.term()
    p.end()
    return t


def parse_equation(text: str, sig: Signature, vars: Iterable[str] | None = None) -> Equation:
    p = _Parser(text, sig, vars)
    lhs = p.term()
    p.take("=", "'='")
    rhs = p.term()
    p.end()
    return Equation(lhs, rhs)


def parse_equation_set(text: str, sig: Signature) -> EquationSet:
    """Parse an equation-set file: a ``vars:`` header, then one equation per line."""
    declared = None
    eqs = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("vars:"):
            if declared is not None:
                raise InputError(f"line {lineno}: second vars header")
            body = line[len("vars:"):].strip()
            declared = [v.strip() for v in body.split(",")] if body else []
            for v in declared:
                if not IDENT_RE.fullmatch(v):
                    raise InputError(f"line {lineno}: bad variable name {v!r}")
                if v in sig:
                    raise InputError(
                        f"line {lineno}: variable {v!r} clashes with an operation symbol"
                    )
            continue
        if declared is None:
            raise InputError(f"line {lineno}: equation before the vars header")
        try:
            eqs.append(parse_equation(line, sig, declared))
        except TermSyntaxError as exc:
            raise TermSyntaxError(f"line {lineno}: {exc}") from None
    if declared is None:
        raise InputError("missing 'vars:' header")
    return EquationSet(tuple(eqs), tuple(declared))
