"""Finite lattices given by their order matrix.

Elements are indices ``0..m-1``; ``leq[a, b]`` says ``a <= b``.  Join and
meet tables are derived from the order, so any finite poset that is a
lattice can be analysed here, not only congruence lattices.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Sequence

import numpy as np

from .errors import InputError


@dataclass(frozen=True)
class Verdict:
    """A yes/no answer with a counterexample when the answer is no."""

    ok: bool
    witness: Any = None

    def __bool__(self):
        return self.ok


def _bound_table(leq: np.ndarray, upper: bool) -> np.ndarray:
    # least upper bound = the upper bound with the smallest down-set
    order = leq if upper else leq.T
    rank = order.sum(axis=0)
    m = len(leq)
    out = np.empty((m, m), dtype=np.int64)
    big = m + 1
    for a in range(m):
        bounds = order[a][None, :] & order
        scores = np.where(bounds, rank[None, :], big)
        best = scores.argmin(axis=1)
        ok = bounds[np.arange(m), best] & (~bounds | order[best]).all(axis=1)
        if not ok.all():
            b = int(np.nonzero(~ok)[0][0])
            kind = "join" if upper else "meet"
            raise InputError(f"elements {a} and {b} have no {kind}: not a lattice")
        out[a] = best
    return out


class FiniteLattice:
    def __init__(self, leq, labels: Sequence[Any] | None = None):
        leq = np.asarray(leq, dtype=bool)
        m = len(leq)
        if leq.shape != (m, m) or m == 0:
            raise InputError("order matrix must be square and nonempty")
        if not leq.diagonal().all():
            raise InputError("order is not reflexive")
        if (leq & leq.T & ~np.eye(m, dtype=bool)).any():
            raise InputError("order is not antisymmetric")
        if ((leq.astype(np.int64) @ leq.astype(np.int64) > 0) & ~leq).any():
            raise InputError("order is not transitive")
        leq.flags.writeable = False
        self.leq = leq
        self.labels = list(labels) if labels is not None else list(range(m))
        self.join_table = _bound_table(leq, upper=True)
        self.meet_table = _bound_table(leq, upper=False)
        ranks = leq.sum(axis=0)
        self.bottom = int(ranks.argmin())
        self.top = int(ranks.argmax())

    def __len__(self):
        return len(self.leq)

    def le(self, a: int, b: int) -> bool:
        return bool(self.leq[a, b])

    def join(self, a: int, b: int) -> int:
        return int(self.join_table[a, b])

    def meet(self, a: int, b: int) -> int:
        return int(self.meet_table[a, b])

    @classmethod
    def from_covers(cls, m: int, covers: Sequence[tuple[int, int]], labels=None) -> "FiniteLattice":
        """Lattice from its Hasse diagram; ``(a, b)`` means ``a`` is covered by ``b``."""
        leq = np.eye(m, dtype=bool)
        for a, b in covers:
            leq[a, b] = True
        for k in range(m):
            leq |= leq[:, k : k + 1] & leq[k : k + 1, :]
        return cls(leq, labels)

    def covers(self) -> list[tuple[int, int]]:
        lt = self.leq & ~np.eye(len(self), dtype=bool)
        via = (lt.astype(np.int64) @ lt.astype(np.int64)) > 0
        return [(int(a), int(b)) for a, b in zip(*np.nonzero(lt & ~via))]


def diamond() -> FiniteLattice:
    """M3: bottom 0, three pairwise incomparable atoms 1, 2, 3, top 4."""
    return FiniteLattice.from_covers(5, [(0, 1), (0, 2), (0, 3), (1, 4), (2, 4), (3, 4)], ["0", "a", "b", "c", "1"])


def pentagon() -> FiniteLattice:
    """N5: 0 < a < b < 1 and 0 < c < 1."""
    return FiniteLattice.from_covers(5, [(0, 1), (1, 2), (2, 4), (0, 3), (3, 4)], ["0", "a", "b", "c", "1"])


def lattice_residual(L: FiniteLattice, a: int, b: int) -> int | None:
    """Least ``c`` with ``a <= b v c``, or None when that set has no least element."""
    cand = L.leq[a, L.join_table[b]]
    idx = np.nonzero(cand)[0]
    for c in idx:
        if L.leq[c, idx].all():
            return int(c)
    return None


def check_distributive(L: FiniteLattice) -> Verdict:
    J, M = L.join_table, L.meet_table
    for a in range(len(L)):
        lhs = M[a][J]
        ma = M[a]
        rhs = J[ma[:, None], ma[None, :]]
        bad = np.nonzero(lhs != rhs)
        if bad[0].size:
            return Verdict(False, (a, int(bad[0][0]), int(bad[1][0])))
    return Verdict(True)


def check_dually_brouwerian(L: FiniteLattice) -> Verdict:
    m = len(L)
    J = L.join_table
    rank = L.leq.sum(axis=0)
    for b in range(m):
        # cand[a, c]: a <= b v c
        cand = L.leq[np.arange(m)[:, None], J[b][None, :]]
        scores = np.where(cand, rank[None, :], m + 1)
        best = scores.argmin(axis=1)
        # best must lie below every candidate
        ok = (~cand | L.leq[best]).all(axis=1)
        if not ok.all():
            return Verdict(False, (int(np.nonzero(~ok)[0][0]), b))
    return Verdict(True)
