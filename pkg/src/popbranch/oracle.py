"""Exhaustive ground truth for small instances.

Every parent map (one incoming edge or none per node) is enumerated and
cyclic ones are dropped.  Pairwise votes are then a sum of per-node
lookup tables, evaluated in numpy blocks.

For an :class:`Instance` the objects are branchings of G.  For a
:class:`RootedInstance` they are spanning arborescences of D; with an
augmented root these correspond one-to-one to branchings of G and vote
identically.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterator

import numpy as np

from .errors import BudgetExceeded
from .instance import Branching, Pref, RootedInstance, _cmp, has_cycle

DEFAULT_BUDGET = 10**6
_BLOCK = 256


def _options(inst) -> tuple[list, list[list]]:
    rooted = isinstance(inst, RootedInstance)
    nodes = list(inst.nodes)
    opts = []
    for v in nodes:
        ins = [e for e in inst.in_edges.get(v, ()) if inst.edge[e].tail != v]
        opts.append(list(ins) if rooted else [None] + list(ins))
    return nodes, opts


def enumerate_branchings(inst, budget: int = DEFAULT_BUDGET) -> Iterator[Branching]:
    nodes, opts = _options(inst)
    total = math.prod(len(o) for o in opts)
    if total > budget:
        raise BudgetExceeded(f"{total} parent maps exceed the budget of {budget}")
    for choice in itertools.product(*opts):
        parent = dict(zip(nodes, choice))
        if not has_cycle(inst, parent):
            yield Branching(parent)


@dataclass
class VoteTable:
    """All branchings of an instance together with their pairwise votes."""

    inst: object
    branchings: list
    choice: np.ndarray  # (K, n) option index per node
    tables: list  # per node (k_v, k_v) int8 matrix, +1 where row option wins

    @classmethod
    def build(cls, inst, budget: int = DEFAULT_BUDGET) -> "VoteTable":
        nodes, opts = _options(inst)
        branchings = list(enumerate_branchings(inst, budget))
        index = [{e: i for i, e in enumerate(o)} for o in opts]
        choice = np.array(
            [[index[j][b.parent[v]] for j, v in enumerate(nodes)] for b in branchings],
            dtype=np.int64,
        ).reshape(len(branchings), len(nodes))
        better = inst.better
        tables = []
        for o in opts:
            t = np.zeros((len(o), len(o)), dtype=np.int8)
            for i, e in enumerate(o):
                for j, f in enumerate(o):
                    t[i, j] = int(_cmp(better, e, f))
            tables.append(t)
        return cls(inst, branchings, choice, tables)

    def __len__(self):
        return len(self.branchings)

    def wins(self, rows: np.ndarray, cols: np.ndarray) -> np.ndarray:
        """phi(row, col): nodes strictly preferring the row branching."""
        out = np.zeros((len(rows), len(cols)), dtype=np.int32)
        for j, t in enumerate(self.tables):
            out += t[np.ix_(self.choice[rows, j], self.choice[cols, j])] == Pref.PREFERS_FIRST
        return out

    def _blocks(self):
        everyone = np.arange(len(self))
        for start in range(0, len(self), _BLOCK):
            rows = everyone[start:start + _BLOCK]
            yield rows, self.wins(rows, everyone), self.wins(everyone, rows).T

    @cached_property
    def margins(self) -> np.ndarray:
        """mu(B) = max over B' of phi(B', B) - phi(B, B')."""
        out = np.zeros(len(self), dtype=np.int64)
        for rows, mine, theirs in self._blocks():
            out[rows] = (theirs - mine).max(axis=1)
        return out

    @cached_property
    def factors(self) -> list:
        """Exact u(B) per branching: Fraction, 0 when unchallenged, or inf."""
        out = []
        for _, mine, theirs in self._blocks():
            safe_den = np.where(mine > 0, mine, 1)
            ratio = np.where(theirs > 0, np.where(mine > 0, theirs / safe_den, np.inf), -1.0)
            # distinct ratios of integers <= n are far apart, so the float argmax is exact
            best = ratio.argmax(axis=1)
            for i, k in enumerate(best):
                r = ratio[i, k]
                if r < 0:
                    out.append(Fraction(0))
                elif r == np.inf:
                    out.append(math.inf)
                else:
                    out.append(Fraction(int(theirs[i, k]), int(mine[i, k])))
        return out

    def index_of(self, b: Branching) -> int:
        return self.branchings.index(b)


def brute_popular(inst, budget: int = DEFAULT_BUDGET) -> list[Branching]:
    vt = VoteTable.build(inst, budget)
    return [b for b, mu in zip(vt.branchings, vt.margins) if mu == 0]


def brute_min_margin(inst, budget: int = DEFAULT_BUDGET) -> tuple[int, Branching]:
    vt = VoteTable.build(inst, budget)
    k = int(np.argmin(vt.margins))
    return int(vt.margins[k]), vt.branchings[k]


def brute_min_factor(inst, budget: int = DEFAULT_BUDGET):
    vt = VoteTable.build(inst, budget)
    k = min(range(len(vt)), key=lambda i: vt.factors[i])
    return vt.factors[k], vt.branchings[k]


def brute_margin(inst, b: Branching, budget: int = DEFAULT_BUDGET) -> int:
    vt = VoteTable.build(inst, budget)
    return int(vt.margins[vt.index_of(b)])


def brute_factor(inst, b: Branching, budget: int = DEFAULT_BUDGET):
    vt = VoteTable.build(inst, budget)
    return vt.factors[vt.index_of(b)]
