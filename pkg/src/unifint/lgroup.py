"""Variable elimination for inequations ``0 <= t`` over lattice-ordered abelian groups.

Terms are integer combinations of variables.  To eliminate ``x`` every
inequation mentioning it is scaled so that ``x`` has coefficient ``+n`` or
``-n`` (``n`` the lcm of the absolute coefficients), giving lower rows
``0 <= a_i + n*x`` and upper rows ``0 <= b_j - n*x``.  The result is every
``0 <= a_i + b_j`` together with the rows that never mentioned ``x``.

Satisfaction is checked in the rationals with exact arithmetic.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import InputError, TermSyntaxError, UnassignedVariable
from .terms import IDENT_RE


@dataclass(frozen=True)
class LinearTerm:
    """Integer combination of variables; ``coeffs`` is sorted and has no zeros."""

    coeffs: tuple[tuple[str, int], ...] = ()

    @classmethod
    def of(cls, mapping: Mapping[str, int] | Iterable[tuple[str, int]]) -> "LinearTerm":
        items = mapping.items() if isinstance(mapping, Mapping) else mapping
        acc: dict[str, int] = {}
        for v, c in items:
            acc[v] = acc.get(v, 0) + int(c)
        return cls(tuple(sorted((v, c) for v, c in acc.items() if c)))

    def coeff(self, var: str) -> int:
        for v, c in self.coeffs:
            if v == var:
                return c
        return 0

    @property
    def variables(self) -> tuple[str, ...]:
        return tuple(v for v, _ in self.coeffs)

    def is_zero(self) -> bool:
        return not self.coeffs

    def __add__(self, other: "LinearTerm") -> "LinearTerm":
        return LinearTerm.of(list(self.coeffs) + list(other.coeffs))

    def __sub__(self, other: "LinearTerm") -> "LinearTerm":
        return self + other.scale(-1)

    def scale(self, k: int) -> "LinearTerm":
        return LinearTerm.of((v, c * k) for v, c in self.coeffs)

    def without(self, var: str) -> "LinearTerm":
        return LinearTerm(tuple((v, c) for v, c in self.coeffs if v != var))

    def content(self) -> int:
        return math.gcd(*(abs(c) for _, c in self.coeffs)) if self.coeffs else 0

    def evaluate(self, point: Mapping[str, Fraction]) -> Fraction:
        total = Fraction(0)
        for v, c in self.coeffs:
            try:
                total += c * Fraction(point[v])
            except KeyError:
                raise UnassignedVariable(f"variable {v!r} is not assigned") from None
        return total

    def format(self, order: Sequence[str] | None = None) -> str:
        items = list(self.coeffs)
        if order is not None:
            rank = {v: i for i, v in enumerate(order)}
            items.sort(key=lambda vc: (rank.get(vc[0], len(rank)), vc[0]))
        if not items:
            return "0"
        out = []
        for k, (v, c) in enumerate(items):
            mag = abs(c)
            body = v if mag == 1 else f"{mag}*{v}"
            if k == 0:
                out.append(body if c > 0 else f"-{body}")
            else:
                out.append(f"+ {body}" if c > 0 else f"- {body}")
        return " ".join(out)

    def __str__(self):
        return self.format()


@dataclass(frozen=True)
class Inequation:
    """``0 <= rhs``."""

    rhs: LinearTerm

    def normalized(self) -> "Inequation":
        g = self.rhs.content()
        return self if g <= 1 else Inequation(LinearTerm.of((v, c // g) for v, c in self.rhs.coeffs))

    def holds(self, point: Mapping[str, Fraction]) -> bool:
        return self.rhs.evaluate(point) >= 0

    def format(self, order=None) -> str:
        return f"0 <= {self.rhs.format(order)}"

    def __str__(self):
        return self.format()


@dataclass(frozen=True)
class InequationSystem:
    inequations: tuple[Inequation, ...]
    variables: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "inequations", tuple(self.inequations))
        object.__setattr__(self, "variables", tuple(self.variables))
        if len(set(self.variables)) != len(self.variables):
            raise InputError("duplicate variables")
        declared = set(self.variables)
        for q in self.inequations:
            missing = set(q.rhs.variables) - declared
            if missing:
                raise InputError(f"inequation {q} uses undeclared variables {sorted(missing)}")

    @classmethod
    def of(cls, rows: Iterable[Mapping[str, int]], variables: Sequence[str] | None = None) -> "InequationSystem":
        ineqs = tuple(Inequation(LinearTerm.of(r)) for r in rows)
        if variables is None:
            seen: dict[str, None] = {}
            for q in ineqs:
                for v, _ in q.rhs.coeffs:
                    seen.setdefault(v)
            variables = tuple(seen)
        return cls(ineqs, tuple(variables))

    def __iter__(self):
        return iter(self.inequations)

    def __len__(self):
        return len(self.inequations)

    def matrix(self, order: Sequence[str] | None = None) -> np.ndarray:
        order = self.variables if order is None else tuple(order)
        M = np.zeros((len(self.inequations), len(order)), dtype=np.int64)
        col = {v: j for j, v in enumerate(order)}
        for i, q in enumerate(self.inequations):
            for v, c in q.rhs.coeffs:
                M[i, col[v]] = c
        return M

    def to_text(self) -> str:
        lines = [f"vars: {', '.join(self.variables)}"]
        lines += [q.format(self.variables) for q in self.inequations]
        return "\n".join(lines) + "\n"

    def __str__(self):
        return "{" + ", ".join(q.format(self.variables) for q in self.inequations) + "}"


# --- elimination ---------------------------------------------------------------------


def common_coefficient(S: InequationSystem, x: str) -> int:
    cs = [abs(q.rhs.coeff(x)) for q in S if q.rhs.coeff(x)]
    return math.lcm(*cs) if cs else 1


def _scales(S: InequationSystem, x: str) -> list[int]:
    n = common_coefficient(S, x)
    return [n // abs(q.rhs.coeff(x)) if q.rhs.coeff(x) else 1 for q in S]


def scale_to_common(S: InequationSystem, x: str) -> InequationSystem:
    """Multiply each row mentioning ``x`` so that ``x`` has coefficient ``+n`` or ``-n``."""
    if x not in S.variables:
        raise InputError(f"{x!r} is not a variable of the system")
    rows = tuple(Inequation(q.rhs.scale(k)) for q, k in zip(S, _scales(S, x)))
    return InequationSystem(rows, S.variables)


@dataclass(frozen=True)
class Certificate:
    """``divisor * output = sum(mult * input[k])`` with nonnegative integer multipliers."""

    multipliers: tuple[tuple[int, int], ...]
    divisor: int

    def to_json(self):
        return {"multipliers": {str(k): m for k, m in self.multipliers}, "divisor": self.divisor}


def eliminate_with_certificate(S: InequationSystem, x: str) -> tuple[InequationSystem, tuple[Certificate, ...]]:
    if x not in S.variables:
        raise InputError(f"{x!r} is not a variable of the system")
    scales = _scales(S, x)
    lower, upper, rest = [], [], []
    for k, (q, s) in enumerate(zip(S, scales)):
        c = q.rhs.coeff(x)
        row = (k, s, q.rhs.scale(s).without(x))
        (lower if c > 0 else upper if c < 0 else rest).append(row)
    out: list[Inequation] = []
    certs: list[Certificate] = []
    seen = set()

    def emit(q, cert):
        if q.rhs.is_zero() or q in seen:
            return
        seen.add(q)
        out.append(q)
        certs.append(cert)

    for i, si, a in lower:
        for j, sj, b in upper:
            total = a + b
            g = total.content()
            q = Inequation(total).normalized()
            emit(q, Certificate(tuple(sorted({i: si, j: sj}.items())), max(g, 1)))
    for k, _, g_row in rest:
        # rows without x pass through unchanged
        emit(S.inequations[k], Certificate(((k, 1),), 1))
    kept = tuple(v for v in S.variables if v != x)
    return InequationSystem(tuple(out), kept), tuple(certs)


def eliminate(S: InequationSystem, x: str) -> InequationSystem:
    return eliminate_with_certificate(S, x)[0]


def verify_certificate(S: InequationSystem, out: InequationSystem, certs: Sequence[Certificate]) -> bool:
    if len(out) != len(certs):
        return False
    for q, cert in zip(out, certs):
        if cert.divisor < 1 or any(m < 0 for _, m in cert.multipliers):
            return False
        total = LinearTerm()
        for k, m in cert.multipliers:
            total = total + S.inequations[k].rhs.scale(m)
        if total != q.rhs.scale(cert.divisor):
            return False
    return True


def point_satisfies(S: InequationSystem, point: Mapping[str, Fraction]) -> bool:
    return all(q.holds(point) for q in S)


@dataclass(frozen=True)
class Interval:
    """Closed interval; ``None`` bounds are infinite."""

    lo: Fraction | None
    hi: Fraction | None
    empty: bool = False

    def __bool__(self):
        return not self.empty

    def __contains__(self, v) -> bool:
        if self.empty:
            return False
        return (self.lo is None or self.lo <= v) and (self.hi is None or v <= self.hi)

    def __str__(self):
        if self.empty:
            return "empty"
        lo = "-inf" if self.lo is None else str(self.lo)
        hi = "inf" if self.hi is None else str(self.hi)
        return f"[{lo}, {hi}]"


def witness_interval(S: InequationSystem, x: str, point: Mapping[str, Fraction]) -> Interval:
    """Values of ``x`` that satisfy ``S`` together with ``point``."""
    lo = hi = None
    feasible = True
    for q in S:
        c = q.rhs.coeff(x)
        r = q.rhs.without(x).evaluate(point)
        if c == 0:
            feasible &= r >= 0
        elif c > 0:
            b = -r / c
            lo = b if lo is None or b > lo else lo
        else:
            b = r / -c
            hi = b if hi is None or b < hi else hi
    if not feasible or (lo is not None and hi is not None and lo > hi):
        return Interval(lo, hi, True)
    return Interval(lo, hi)


# --- parsing ------------------------------------------------------------------------------

_TOK = re.compile(r"\s*(?:(<=|>=|=|\*|\+|-|\(|\)|,)|(\d+)|([a-zA-Z_][a-zA-Z0-9_]*))")
_LATTICE = {"meet", "join"}


def _lex(text: str):
    pos, toks = 0, []
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOK.match(text, pos)
        if not m:
            raise TermSyntaxError(f"unexpected character {text[pos:].strip()[0]!r}", pos)
        kind = "op" if m.group(1) else "int" if m.group(2) else "id"
        toks.append((kind, m.group(m.lastindex), m.start(m.lastindex)))
        pos = m.end()
    toks.append(("eof", "", len(text)))
    return toks


class _IneqParser:
    def __init__(self, text):
        self.toks = _lex(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def next(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, value):
        t = self.next()
        if t[1] != value:
            raise TermSyntaxError(f"unexpected {t[1] or 'end of input'!r}", t[2], repr(value))

    def side(self):
        """A linear term, or a top-level meet/join of linear terms."""
        k, v, pos = self.peek()
        if k == "id" and v in _LATTICE and self.toks[self.i + 1][1] == "(":
            self.i += 2
            args = [self.linear()]
            while self.peek()[1] == ",":
                self.i += 1
                args.append(self.linear())
            self.expect(")")
            return v, args
        return "term", [self.linear()]

    def linear(self) -> LinearTerm:
        acc: list[tuple[str, int]] = []
        sign = 1
        if self.peek()[1] in "+-" and self.peek()[0] == "op":
            sign = -1 if self.next()[1] == "-" else 1
        acc += self.monomial(sign)
        while self.peek()[1] in ("+", "-"):
            sign = -1 if self.next()[1] == "-" else 1
            acc += self.monomial(sign)
        return LinearTerm.of(acc)

    def monomial(self, sign):
        k, v, pos = self.next()
        if k == "int":
            n = int(v)
            if self.peek()[1] == "*":
                self.i += 1
                k2, name, pos2 = self.next()
                if k2 != "id" or name in _LATTICE:
                    raise TermSyntaxError("expected a variable after '*'", pos2, "variable")
                return [(name, sign * n)]
            if n != 0:
                raise InputError(f"constant {n} at position {pos}: terms have no constant part")
            return []
        if k == "id":
            if v in _LATTICE:
                raise InputError(f"{v} at position {pos} must be the whole side of an inequation")
            if not IDENT_RE.fullmatch(v):
                raise TermSyntaxError(f"bad variable {v!r}", pos)
            return [(v, sign)]
        raise TermSyntaxError(f"unexpected {v or 'end of input'!r}", pos, "term")


def parse_inequation(text: str) -> list[Inequation]:
    """One input line as a list of ``0 <= t`` rows.

    ``s <= t`` and ``t >= s`` give ``0 <= t - s``; ``s = t`` gives both
    directions; ``s <= meet(t1, t2)`` and ``join(s1, s2) <= t`` split into
    one row per argument.  A join on the larger side or a meet on the
    smaller side is not a conjunction and is rejected.
    """
    p = _IneqParser(text)
    left = p.side()
    k, rel, pos = p.next()
    if rel not in ("<=", ">=", "="):
        raise TermSyntaxError(f"unexpected {rel or 'end of input'!r}", pos, "'<=', '>=' or '='")
    right = p.side()
    if p.peek()[0] != "eof":
        t = p.peek()
        raise TermSyntaxError(f"unexpected {t[1]!r}", t[2], "end of input")
    if rel == ">=":
        left, right, rel = right, left, "<="

    def rows(small, big):
        if small[0] == "meet":
            raise InputError("a meet on the smaller side of <= is not a conjunction of linear inequations")
        if big[0] == "join":
            raise InputError("a join on the larger side of <= is not supported")
        return [Inequation(b - s) for s in small[1] for b in big[1]]

    if rel == "<=":
        return rows(left, right)
    if left[0] != "term" or right[0] != "term":
        raise InputError("equations between meets or joins are not supported")
    return rows(left, right) + rows(right, left)


def parse_inequation_system(text: str) -> InequationSystem:
    declared = None
    rows: list[Inequation] = []
    order: dict[str, None] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("vars:"):
            if declared is not None or rows:
                raise InputError(f"line {lineno}: vars header must come first")
            body = line[5:].strip()
            declared = tuple(v.strip() for v in body.split(",")) if body else ()
            continue
        try:
            new = parse_inequation(line)
        except TermSyntaxError as exc:
            raise TermSyntaxError(f"line {lineno}: {exc}") from None
        except InputError as exc:
            raise InputError(f"line {lineno}: {exc}") from None
        for name in IDENT_RE.findall(line):
            if name not in _LATTICE:
                order.setdefault(name)
        rows += new
    return InequationSystem(tuple(rows), declared if declared is not None else tuple(order))


# --- fuzzing --------------------------------------------------------------------------------------


def random_system(rng: np.random.Generator, max_rows=6, max_vars=4, coef=5, x="x") -> InequationSystem:
    k = int(rng.integers(1, max_vars + 1))
    names = (x,) + tuple(f"y{j}" for j in range(1, k))
    m = int(rng.integers(1, max_rows + 1))
    M = rng.integers(-coef, coef + 1, size=(m, k))
    return InequationSystem.of(
        [{v: int(c) for v, c in zip(names, row)} for row in M],
        names,
    )


def _interval_nonempty(M: np.ndarray, xcol: int, P: np.ndarray) -> np.ndarray:
    """Per point: is there an ``x`` satisfying all rows of ``M``?

    ``P`` holds integer numerators over a per-point positive denominator,
    with the ``x`` column ignored.  Bounds are compared as exact fractions.
    """
    c = M[:, xcol]
    R = (np.delete(M, xcol, axis=1) @ np.delete(P, xcol, axis=1).T)  # rows x points
    ok = np.ones(P.shape[0], dtype=bool)
    for r in R[c == 0]:
        ok &= r >= 0
    # lower bounds -r/c (c > 0), upper bounds r/|c| (c < 0), as (num, den) with den > 0
    lo_num = lo_den = hi_num = hi_den = None
    for r, ci in zip(R, c):
        if ci > 0:
            num, den = -r, np.full_like(r, ci)
            if lo_num is None:
                lo_num, lo_den = num, den
            else:
                take = num * lo_den > lo_num * den
                lo_num, lo_den = np.where(take, num, lo_num), np.where(take, den, lo_den)
        elif ci < 0:
            num, den = r, np.full_like(r, -ci)
            if hi_num is None:
                hi_num, hi_den = num, den
            else:
                take = num * hi_den < hi_num * den
                hi_num, hi_den = np.where(take, num, hi_num), np.where(take, den, hi_den)
    if lo_num is not None and hi_num is not None:
        ok &= lo_num * hi_den <= hi_num * lo_den
    return ok


def _sample_points(rng, S: InequationSystem, out: InequationSystem, count: int, spread=10):
    """Integer numerator rows and denominators; half the points sit on a row boundary."""
    k = len(S.variables)
    den = rng.integers(1, 13, size=count).astype(np.int64)
    P = rng.integers(-spread, spread + 1, size=(count, k)).astype(np.int64) * den[:, None]
    P += rng.integers(-5, 6, size=(count, k))
    rows = np.concatenate([S.matrix(), out.matrix(S.variables)]) if len(out) else S.matrix()
    xcol = S.variables.index("x") if "x" in S.variables else -1
    for t in np.nonzero(rng.random(count) < 0.5)[0]:
        row = rows[rng.integers(len(rows))]
        cols = [j for j in range(k) if row[j] and j != xcol]
        if not cols:
            continue
        v = cols[int(rng.integers(len(cols)))]
        rest = int(row @ P[t] - row[v] * P[t, v])
        cv = int(row[v])
        # solve row . p = 0 for coordinate v, rescaling the common denominator by |cv|
        P[t] *= abs(cv)
        den[t] *= abs(cv)
        P[t, v] = -rest if cv > 0 else rest
    return P, den


@dataclass(frozen=True)
class FuzzReport:
    seed: int
    systems: int
    points: int
    discrepancies: tuple
    certificate_failures: tuple
    exact_crosschecks: int

    @property
    def passed(self) -> bool:
        return not self.discrepancies and not self.certificate_failures

    def to_json(self):
        return {
            "seed": self.seed,
            "systems": self.systems,
            "pointsPerSystem": self.points,
            "pass": self.passed,
            "discrepancies": list(self.discrepancies),
            "certificateFailures": list(self.certificate_failures),
            "exactCrosschecks": self.exact_crosschecks,
        }


def fuzz_elimination(seed: int = 0, systems: int = 1000, points: int = 1000, exact_sample: int = 5) -> FuzzReport:
    """Compare ``eliminate`` against the feasible ``x``-interval on random systems and points.

    Each system draws from its own child of one seed sequence.  For the
    first ``exact_sample`` points of each system the vectorised answer is
    also checked against the ``Fraction``-based ``witness_interval``.
    """
    bad, cert_bad = [], []
    crosschecks = 0
    for child in np.random.SeedSequence(seed).spawn(systems):
        rng = np.random.default_rng(child)
        S = random_system(rng)
        out, certs = eliminate_with_certificate(S, "x")
        if not verify_certificate(S, out, certs):
            cert_bad.append(S.to_text())
        P, den = _sample_points(rng, S, out, points)
        xcol = S.variables.index("x")
        want = _interval_nonempty(S.matrix(), xcol, P)
        if len(out):
            got = (out.matrix(S.variables) @ P.T >= 0).all(axis=0)
        else:
            got = np.ones(points, dtype=bool)
        diff = np.nonzero(want != got)[0]
        if diff.size and len(bad) < 10:
            t = int(diff[0])
            bad.append({"system": S.to_text(), "point": [f"{n}/{den[t]}" for n in P[t]]})
        for t in range(min(exact_sample, points)):
            pt = {v: Fraction(int(P[t, j]), int(den[t])) for j, v in enumerate(S.variables) if v != "x"}
            exact = bool(witness_interval(S, "x", pt))
            crosschecks += 1
            if exact != bool(want[t]) or exact != point_satisfies(out, pt):
                if len(bad) < 10:
                    bad.append({"system": S.to_text(), "point": {k: str(v) for k, v in pt.items()}})
    return FuzzReport(seed, systems, points, tuple(bad), tuple(cert_bad), crosschecks)
