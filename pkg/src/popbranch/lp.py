"""Small exact linear programs.

Dense two-phase tableau simplex over :class:`fractions.Fraction` with
Bland's rule, so it terminates and is exact.  Meant for the few hundred
rows the mixed-branching solver generates, not for anything large.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

LE, EQ, GE = "<=", "=", ">="

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


@dataclass
class LPResult:
    status: str
    x: Optional[list] = None
    value: Optional[Fraction] = None


class _Tableau:
    def __init__(self, rows: list[list[Fraction]], rhs: list[Fraction], basis: list[int]):
        self.rows = rows
        self.rhs = rhs
        self.basis = basis

    def pivot(self, r: int, c: int):
        row = self.rows[r]
        p = row[c]
        if p != 1:
            inv = 1 / p
            self.rows[r] = row = [v * inv for v in row]
            self.rhs[r] *= inv
        for i, other in enumerate(self.rows):
            if i == r:
                continue
            f = other[c]
            if f:
                self.rows[i] = [a - f * b for a, b in zip(other, row)]
                self.rhs[i] -= f * self.rhs[r]
        self.basis[r] = c

    def optimise(self, cost: list[Fraction], allowed: int) -> str:
        """Maximise ``cost . x`` over the first ``allowed`` columns (Bland's rule)."""
        while True:
            basic = {b: i for i, b in enumerate(self.basis)}
            entering = None
            for j in range(allowed):
                if j in basic:
                    continue
                reduced = cost[j] - sum(cost[b] * self.rows[i][j] for i, b in enumerate(self.basis) if cost[b])
                if reduced > 0:
                    entering = j
                    break
            if entering is None:
                return OPTIMAL
            best = None
            for i, row in enumerate(self.rows):
                a = row[entering]
                if a > 0:
                    ratio = self.rhs[i] / a
                    key = (ratio, self.basis[i])
                    if best is None or key < best[0]:
                        best = (key, i)
            if best is None:
                return UNBOUNDED
            self.pivot(best[1], entering)


def solve_lp(
    c: Sequence,
    A: Sequence[Sequence],
    senses: Sequence[str],
    b: Sequence,
) -> LPResult:
    """Maximise ``c . x`` subject to ``A x (senses) b`` and ``x >= 0``."""
    nvar = len(c)
    m = len(A)
    F = Fraction
    rows, rhs, basis = [], [], []
    slack_cols = sum(1 for s in senses if s != EQ)
    width = nvar + slack_cols + m  # structural, slack, artificial
    k = nvar
    need_art = []
    for i in range(m):
        row = [F(v) for v in A[i]] + [F(0)] * (width - nvar)
        bi = F(b[i])
        s = senses[i]
        if s not in (LE, EQ, GE):
            raise ValueError(f"unknown sense {s!r}")
        slack = None
        if s != EQ:
            slack = k
            row[k] = F(1) if s == LE else F(-1)
            k += 1
        if bi < 0:
            row = [-v for v in row]
            bi = -bi
        if slack is not None and row[slack] == 1:
            basis.append(slack)
        else:
            basis.append(None)
            need_art.append(i)
        rows.append(row)
        rhs.append(bi)
    art_start = nvar + slack_cols
    for n_art, i in enumerate(need_art):
        col = art_start + n_art
        rows[i][col] = F(1)
        basis[i] = col
    width = art_start + len(need_art)
    rows = [row[:width] for row in rows]
    t = _Tableau(rows, rhs, basis)

    if need_art:
        phase1 = [F(0)] * width
        for j in range(art_start, width):
            phase1[j] = F(-1)
        t.optimise(phase1, width)
        if any(t.rhs[i] != 0 for i, bcol in enumerate(t.basis) if bcol >= art_start):
            return LPResult(INFEASIBLE)
        # drive zero-valued artificials out of the basis, or drop redundant rows
        for i in reversed(range(len(t.rows))):
            if t.basis[i] < art_start:
                continue
            col = next((j for j in range(art_start) if t.rows[i][j] != 0), None)
            if col is None:
                del t.rows[i], t.rhs[i], t.basis[i]
            else:
                t.pivot(i, col)
    cost = [F(v) for v in c] + [F(0)] * (width - nvar)
    status = t.optimise(cost, art_start)
    if status != OPTIMAL:
        return LPResult(status)
    x = [F(0)] * nvar
    for i, bcol in enumerate(t.basis):
        if bcol < nvar:
            x[bcol] = t.rhs[i]
    return LPResult(OPTIMAL, x, sum(F(ci) * xi for ci, xi in zip(c, x)))
