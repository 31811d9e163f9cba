"""Popular mixed branchings: lotteries over branchings that no branching beats in expectation.

A mixed branching is handled through its fractional image x in the
arborescence polytope of D.  It is popular iff Delta(x, A) >= 0 for every
arborescence A, and both that family and the polytope's cut constraints
can be separated with one min-cost arborescence / max-flow call each.
The LP "maximise z subject to Delta(x, A_i) >= z" is solved by constraint
generation with an exact simplex; the optimum is then written as a convex
combination of arborescences.
"""

from __future__ import annotations

import itertools
import logging
import math
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Optional

from .arborescence import CostedGraph, min_cost_arborescence
from .errors import BudgetExceeded, InfeasiblePoint, SupportTooLarge
from .instance import Branching, RootedInstance, _cmp, has_cycle, project, to_arborescence
from .lp import EQ, GE, LE, OPTIMAL, solve_lp

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class MixedConfig:
    max_nodes: int = 12
    max_rounds: int = 2000
    support_budget: int = 10**5


@dataclass(frozen=True)
class Violation:
    """Why a point is outside the arborescence polytope: ``kind`` is
    "negative", "degree" or "cut"; ``items`` the offending edge, node or set."""

    kind: str
    items: tuple


@dataclass(frozen=True)
class MixedBranching:
    """Weighted branchings of G; weights are positive Fractions summing to 1."""

    components: tuple

    def fractional(self, rooted: RootedInstance) -> dict[str, Fraction]:
        x: dict[str, Fraction] = {}
        for b, w in self.components:
            for eid in to_arborescence(rooted, b).parent.values():
                x[eid] = x.get(eid, Fraction(0)) + w
        return x

    def to_json(self) -> list:
        return [{"branching": list(b.edges), "weight": str(w)} for b, w in self.components]


def _edges(rooted: RootedInstance):
    return [e for e in rooted.edges if e.head != rooted.root and e.tail != e.head]


def indicator(a: Branching) -> dict[str, Fraction]:
    return {eid: Fraction(1) for eid in a.parent.values() if eid is not None}


def _vote(rooted, e: str, f: str) -> int:
    return int(_cmp(rooted.better, e, f))


# -- separation ---------------------------------------------------------------

def _max_flow_cut(nodes, source, sink, arcs) -> tuple[Fraction, set]:
    """Edmonds-Karp on exact capacities; returns (value, source side of a min cut)."""
    cap: dict[tuple, Fraction] = {}
    adj: dict[str, set] = {v: set() for v in nodes}
    for u, v, c in arcs:
        if c <= 0:
            continue
        cap[(u, v)] = cap.get((u, v), Fraction(0)) + c
        cap.setdefault((v, u), Fraction(0))
        adj[u].add(v)
        adj[v].add(u)
    flow = Fraction(0)
    while True:
        prev = {source: None}
        queue = deque([source])
        while queue and sink not in prev:
            u = queue.popleft()
            for w in sorted(adj[u]):
                if w not in prev and cap[(u, w)] > 0:
                    prev[w] = u
                    queue.append(w)
        if sink not in prev:
            return flow, set(prev)
        path, w = [], sink
        while prev[w] is not None:
            path.append((prev[w], w))
            w = prev[w]
        push = min(cap[a] for a in path)
        for u, w in path:
            cap[(u, w)] -= push
            cap[(w, u)] += push
        flow += push


def separate_membership(rooted: RootedInstance, x: Mapping[str, Fraction]) -> Optional[Violation]:
    """None if x lies in the arborescence polytope, else a violated constraint."""
    edges = _edges(rooted)
    for e in edges:
        if Fraction(x.get(e.id, 0)) < 0:
            return Violation("negative", (e.id,))
    for v in rooted.nodes:
        total = sum((Fraction(x.get(eid, 0)) for eid in rooted.in_edges.get(v, ())), Fraction(0))
        if total != 1:
            return Violation("degree", (v,))
    arcs = [(e.tail, e.head, Fraction(x.get(e.id, 0))) for e in edges]
    allnodes = list(rooted.nodes) + [rooted.root]
    for v in rooted.nodes:
        value, side = _max_flow_cut(allnodes, rooted.root, v, arcs)
        if value < 1:
            return Violation("cut", tuple(sorted(set(rooted.nodes) - side)))
    return None


def delta_mixed(rooted: RootedInstance, x: Mapping, y: Mapping) -> Fraction:
    """Delta(x, y) = sum over nodes u and edges e, f into u of x_e y_f vote_u(e, f)."""
    for pt in (x, y):
        bad = separate_membership(rooted, pt)
        if bad is not None:
            raise InfeasiblePoint(f"point violates {bad.kind} constraint at {bad.items}")
    total = Fraction(0)
    for u in rooted.nodes:
        ins = rooted.in_edges.get(u, ())
        for e in ins:
            xe = Fraction(x.get(e, 0))
            if not xe:
                continue
            for f in ins:
                yf = Fraction(y.get(f, 0))
                if yf:
                    total += xe * yf * _vote(rooted, e, f)
    return total


def _cx(rooted: RootedInstance, x: Mapping) -> dict[str, Fraction]:
    """c_x(e) for e into u: x-weight of edges u prefers to e minus x-weight of edges worse than e."""
    better, worse = rooted.better, rooted.worse
    out = {}
    for e in _edges(rooted):
        ins = rooted.in_edges.get(e.head, ())
        out[e.id] = sum(
            (Fraction(x.get(f, 0)) for f in ins if f in better[e.id]), Fraction(0)
        ) - sum((Fraction(x.get(f, 0)) for f in ins if f in worse[e.id]), Fraction(0))
    return out


def separate_popularity(rooted: RootedInstance, x: Mapping) -> Optional[Branching]:
    """None if Delta(x, A) >= 0 for every arborescence A, else an A with Delta(x, A) < 0."""
    bad = separate_membership(rooted, x)
    if bad is not None:
        raise InfeasiblePoint(f"point violates {bad.kind} constraint at {bad.items}")
    edges = _edges(rooted)
    cx = _cx(rooted, x)
    scale = math.lcm(*(c.denominator for c in cx.values())) if cx else 1
    low: dict[str, int] = {}
    ints = {}
    for e in edges:
        ints[e.id] = int(cx[e.id] * scale)
        low[e.head] = min(low.get(e.head, ints[e.id]), ints[e.id])
    shifted = {e.id: ints[e.id] - low[e.head] for e in edges}
    a, cost = min_cost_arborescence(CostedGraph(tuple(rooted.nodes), rooted.root, tuple(edges), shifted))
    if cost + sum(low.values()) < 0:
        return a
    return None


# -- constraint generation ---------------------------------------------------------

@dataclass
class MixedSolution:
    x: dict
    value: Fraction  # LP optimum z, >= 0 at termination
    arborescences: list
    cuts: list
    rounds: int


def solve_mixed_lp(rooted: RootedInstance, config: MixedConfig = MixedConfig()) -> MixedSolution:
    n = rooted.n
    if n > config.max_nodes:
        raise BudgetExceeded(f"n = {n} exceeds the mixed solver budget of {config.max_nodes} nodes")
    edges = _edges(rooted)
    col = {e.id: j for j, e in enumerate(edges)}
    w = len(edges)  # w = z + n, kept non-negative
    nvar = w + 1

    base_rows, base_senses, base_rhs = [], [], []
    for v in rooted.nodes:
        row = [0] * nvar
        for eid in rooted.in_edges.get(v, ()):
            if eid in col:
                row[col[eid]] = 1
        base_rows.append(row)
        base_senses.append(EQ)
        base_rhs.append(1)
    row = [0] * nvar
    row[w] = 1
    base_rows.append(row)
    base_senses.append(LE)
    base_rhs.append(2 * n)

    seed = Branching({v: rooted.root_edge[v] for v in rooted.nodes})
    arbs = [seed]
    cuts: list[tuple] = []
    c = [0] * w + [1]

    def arb_row(a: Branching):
        row = [0] * nvar
        for e in edges:
            row[col[e.id]] = _vote(rooted, e.id, a.parent[e.head])
        row[w] = -1
        return row

    def cut_row(X):
        row = [0] * nvar
        for e in edges:
            if e.head in X and e.tail not in X:
                row[col[e.id]] = 1
        return row

    for rounds in range(1, config.max_rounds + 1):
        rows = base_rows + [cut_row(X) for X in cuts] + [arb_row(a) for a in arbs]
        senses = base_senses + [GE] * (len(cuts) + len(arbs))
        rhs = base_rhs + [1] * len(cuts) + [-n] * len(arbs)
        res = solve_lp(c, rows, senses, rhs)
        if res.status != OPTIMAL:
            raise RuntimeError(f"mixed LP ended {res.status}; this indicates a bug")
        x = {e.id: res.x[col[e.id]] for e in edges if res.x[col[e.id]]}
        z = res.x[w] - n
        bad = separate_membership(rooted, x)
        if bad is not None:
            if bad.kind != "cut":
                raise RuntimeError(f"LP optimum violates a {bad.kind} row; this indicates a bug")
            cuts.append(frozenset(bad.items))
            log.debug("round %d: z=%s, cut %s", rounds, z, sorted(bad.items))
            continue
        witness = separate_popularity(rooted, x)
        if witness is not None:
            arbs.append(witness)
            log.debug("round %d: z=%s, new arborescence", rounds, z)
            continue
        log.info("mixed LP solved after %d rounds with %d cuts and %d arborescences", rounds, len(cuts), len(arbs))
        return MixedSolution(x, z, arbs, cuts, rounds)
    raise BudgetExceeded(f"no convergence within {config.max_rounds} rounds")


# -- decomposition -------------------------------------------------------------------

def _support_arborescences(rooted: RootedInstance, x: Mapping, budget: int) -> list[Branching]:
    nodes = list(rooted.nodes)
    opts = [[eid for eid in rooted.in_edges.get(v, ()) if Fraction(x.get(eid, 0)) > 0] for v in nodes]
    total = math.prod(len(o) for o in opts)
    if total > budget:
        raise SupportTooLarge(f"{total} support parent maps exceed the budget of {budget}")
    out = []
    for choice in itertools.product(*opts):
        parent = dict(zip(nodes, choice))
        if not has_cycle(rooted, parent):
            out.append(Branching(parent))
    return out


def decompose_fractional(rooted: RootedInstance, x: Mapping, extra=(), budget: int = 10**5) -> MixedBranching:
    """Write x as a convex combination of at most m + 1 arborescences, exactly."""
    bad = separate_membership(rooted, x)
    if bad is not None:
        raise InfeasiblePoint(f"point violates {bad.kind} constraint at {bad.items}")
    x = {k: Fraction(v) for k, v in x.items() if Fraction(v)}
    pool = _support_arborescences(rooted, x, budget)
    seen = set(pool)
    for a in extra:
        if a not in seen and set(a.parent.values()) <= set(x):
            pool.append(a)
            seen.add(a)
    support = sorted(x)
    rows = [[1 if eid in a.parent.values() else 0 for a in pool] for eid in support]
    rows.append([1] * len(pool))
    rhs = [x[eid] for eid in support] + [1]
    res = solve_lp([0] * len(pool), rows, [EQ] * len(rows), rhs)
    if res.status != OPTIMAL:
        raise InfeasiblePoint("point is not a convex combination of arborescences in its support")
    comps = [(project(rooted, a), lam) for a, lam in zip(pool, res.x) if lam > 0]
    comps.sort(key=lambda bw: (bw[0].edges, bw[1]))
    return MixedBranching(tuple(comps))


def popular_mixed_branching(rooted: RootedInstance, config: MixedConfig = MixedConfig()) -> MixedBranching:
    sol = solve_mixed_lp(rooted, config)
    return decompose_fractional(rooted, sol.x, extra=sol.arborescences, budget=config.support_budget)
