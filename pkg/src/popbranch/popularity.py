"""Measuring a given branching: votes, margin, factor and certificates.

All rationals are kept as :class:`fractions.Fraction`; nothing here uses
floating point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, NamedTuple, Optional

from .arborescence import CostedGraph, LaminarFamily, arborescence_with_dual, is_laminar, min_cost_arborescence
from .instance import Branching, Pref, RootedInstance, _cmp


@dataclass(frozen=True)
class ComparisonResult:
    for_first: int
    for_second: int

    @property
    def delta(self) -> int:
        return self.for_first - self.for_second

    def to_json(self) -> dict:
        return {"for": self.for_first, "against": self.for_second}


@dataclass(frozen=True)
class DualCertificate:
    """0/1 laminar dual for an arborescence; ``sets`` are the members."""

    sets: tuple
    branching: Branching

    def __len__(self):
        return len(self.sets)

    def to_json(self) -> list:
        return sorted(({"set": sorted(s), "value": 1} for s in self.sets), key=lambda r: r["set"])


class CertificateCheck(NamedTuple):
    valid: bool
    bound: int
    problems: list


def _ratio(t) -> tuple[int, int]:
    t = Fraction(t)
    if t < 0:
        raise ValueError("factor must be non-negative")
    return t.numerator, t.denominator


def comparison_cost(rooted: RootedInstance, a: Branching, eid: str, t=1) -> int:
    """Cost of edge ``eid`` relative to ``a`` for factor ``t = p/q``.

    0 if the head prefers ``eid`` to its edge in ``a``, ``q`` if it is
    indifferent, ``p + q`` if it prefers its edge in ``a``.  With t = 1
    this is the {0, 1, 2} cost whose min-cost arborescence decides
    popularity.
    """
    p, q = _ratio(t)
    e = rooted.edge[eid]
    vote = _cmp(rooted.better, eid, a.parent[e.head])
    if vote == Pref.PREFERS_FIRST:
        return 0
    if vote == Pref.NEITHER:
        return q
    return p + q


def comparison_costs(rooted: RootedInstance, a: Branching, t=1) -> dict[str, int]:
    p, q = _ratio(t)
    better = rooted.better
    costs = {}
    for e in rooted.edges:
        if e.head == rooted.root:
            continue
        vote = _cmp(better, e.id, a.parent[e.head])
        costs[e.id] = 0 if vote == Pref.PREFERS_FIRST else q if vote == Pref.NEITHER else p + q
    return costs


def compare_branchings(inst, b1: Branching, b2: Branching) -> ComparisonResult:
    """Head-to-head vote; a missing incoming edge is every node's worst option."""
    first = second = 0
    better = inst.better
    for v in inst.nodes:
        vote = _cmp(better, b1.parent.get(v), b2.parent.get(v))
        if vote == Pref.PREFERS_FIRST:
            first += 1
        elif vote == Pref.PREFERS_SECOND:
            second += 1
    return ComparisonResult(first, second)


def unpopularity_margin(rooted: RootedInstance, a: Branching) -> tuple[int, Branching]:
    g = CostedGraph.of(rooted, comparison_costs(rooted, a))
    witness, cost = min_cost_arborescence(g)
    return rooted.n - cost, witness


def is_popular(rooted: RootedInstance, a: Branching) -> tuple[bool, Optional[DualCertificate]]:
    g = CostedGraph.of(rooted, comparison_costs(rooted, a))
    _, cost, family = arborescence_with_dual(g)
    if cost != rooted.n:
        return False, None
    # every set is entered by an edge of ``a`` of cost 1, so all duals are 0/1
    assert all(y == 1 for y in family.values)
    return True, DualCertificate(tuple(family.sets), a)


def certificate_problems(rooted: RootedInstance, a: Branching, sets: Iterable, t=1) -> list:
    sets = [frozenset(s) for s in sets]
    problems = []
    node_set = set(rooted.nodes)
    if len(set(sets)) != len(sets):
        problems.append(("duplicate set", ()))
    for s in sets:
        if not s or not s <= node_set:
            problems.append(("set is empty or leaves V", tuple(sorted(s))))
    if not is_laminar(sets):
        for i, x in enumerate(sets):
            for y in sets[i + 1:]:
                if x & y and not (x <= y or y <= x):
                    problems.append(("not laminar", (tuple(sorted(x)), tuple(sorted(y)))))
    p, q = _ratio(t)
    costs = comparison_costs(rooted, a, Fraction(p, q))
    containing: dict[str, list[frozenset]] = {}
    for s in sets:
        for v in s:
            containing.setdefault(v, []).append(s)
    for e in rooted.edges:
        if e.head == rooted.root:
            continue
        load = sum(1 for s in containing.get(e.head, ()) if e.tail not in s)
        if load > costs[e.id]:
            problems.append(("edge over capacity", (e.id, load, costs[e.id])))
    return problems


def validate_certificate(rooted: RootedInstance, a: Branching, cert, t=1) -> CertificateCheck:
    """Check a 0/1 dual certificate; a valid one bounds the margin by n - |Y|.

    With ``t = p/q`` the edge capacities are the factor costs {0, q, p + q}
    and a valid family of n sets proves u(A) <= t.
    """
    sets = cert.sets if isinstance(cert, (DualCertificate, LaminarFamily)) else tuple(cert)
    problems = certificate_problems(rooted, a, sets, t)
    return CertificateCheck(not problems, rooted.n - len(sets), problems)


def check_unpop_factor(rooted: RootedInstance, a: Branching, t) -> tuple[bool, Optional[Branching]]:
    """Decide u(a) <= t.

    With costs {0, q, p + q} an arborescence a2 costs
    q*n - q*phi(a2, a) + p*phi(a, a2), so ``a`` (cost q*n) is optimal
    exactly when no challenger beats the ratio p/q.
    """
    p, q = _ratio(t)
    g = CostedGraph.of(rooted, comparison_costs(rooted, a, Fraction(p, q)))
    witness, cost = min_cost_arborescence(g)
    if cost >= q * rooted.n:
        return True, None
    return False, witness


def factor_candidates(n: int) -> list[Fraction]:
    # phi(a2, a) + phi(a, a2) <= n bounds every achievable ratio
    return sorted({Fraction(p, q) for q in range(1, n + 1) for p in range(1, n + 1 - q + 1) if p + q <= n})


def unpopularity_factor(rooted: RootedInstance, a: Branching):
    """Exact u(a) as a Fraction, or ``math.inf``.

    Returns ``Fraction(0)`` when no branching beats ``a`` at any node
    (the maximum over an empty set of challengers).
    """
    n = rooted.n
    if check_unpop_factor(rooted, a, 0)[0]:
        return Fraction(0)
    if not check_unpop_factor(rooted, a, n)[0]:
        return math.inf
    cands = factor_candidates(n)
    lo, hi = 0, len(cands) - 1
    # u(a) is itself a candidate and "u(a) <= t" is monotone in t
    while lo < hi:
        mid = (lo + hi) // 2
        if check_unpop_factor(rooted, a, cands[mid])[0]:
            hi = mid
        else:
            lo = mid + 1
    return cands[lo]
