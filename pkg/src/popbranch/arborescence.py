"""Min-cost r-arborescences with an integral laminar optimal dual.

The primal is Edmonds' contraction algorithm.  Every time a (super)node
takes its cheapest incoming edge, the cost of that edge is charged to the
node set the supernode represents; the charges are exactly the dual
values ``y_X`` of the cut LP, and because supernodes are nested the
support of ``y`` is laminar.  Costs must be non-negative integers so the
duality is exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

from .errors import Unreachable
from .instance import Branching, Edge


@dataclass(frozen=True)
class CostedGraph:
    """Digraph with a distinguished root and integer edge costs.

    ``nodes`` excludes the root.  Edges into the root and self-loops are
    ignored.
    """

    nodes: tuple
    root: str
    edges: tuple
    cost: Mapping[str, int]

    @classmethod
    def of(cls, rooted, cost: Mapping[str, int]) -> "CostedGraph":
        return cls(tuple(rooted.nodes), rooted.root, tuple(rooted.edges), cost)


@dataclass(frozen=True)
class LaminarFamily:
    sets: tuple
    values: tuple

    @property
    def total(self) -> int:
        return sum(self.values)

    def items(self):
        return zip(self.sets, self.values)

    def to_json(self) -> list:
        rows = [{"set": sorted(s), "value": int(y)} for s, y in self.items()]
        return sorted(rows, key=lambda r: (r["set"], r["value"]))


def is_laminar(sets: Iterable) -> bool:
    sets = [frozenset(s) for s in sets]
    for i, a in enumerate(sets):
        for b in sets[i + 1:]:
            if a & b and not (a <= b or b <= a):
                return False
    return True


def dual_violations(g: CostedGraph, family: LaminarFamily) -> list[str]:
    """Edges whose dual constraint sum_{X entered by e} y_X <= cost(e) fails."""
    bad = []
    for e in g.edges:
        if e.head == g.root or e.tail == e.head:
            continue
        load = sum(y for s, y in family.items() if e.head in s and e.tail not in s)
        if load > g.cost[e.id]:
            bad.append(e.id)
    return bad


def _edmonds(g: CostedGraph):
    nodes = sorted(g.nodes)
    node_set = set(nodes)
    edges = sorted(
        (e for e in g.edges if e.head != g.root and e.tail != e.head and e.head in node_set),
        key=lambda e: e.id,
    )
    for e in edges:
        c = g.cost[e.id]
        if c < 0 or int(c) != c:
            raise ValueError(f"cost of {e.id!r} must be a non-negative integer, got {c!r}")

    ROOT = -1
    top = {v: i for i, v in enumerate(nodes)}
    top[g.root] = ROOT
    members = {i: frozenset([v]) for i, v in enumerate(nodes)}
    children: dict[int, list[tuple[int, str]]] = {}
    active = set(range(len(nodes)))
    next_id = len(nodes)
    reduced = {e.id: int(g.cost[e.id]) for e in edges}
    dual: dict[frozenset, int] = {}

    while True:
        best: dict[int, Edge] = {}
        for e in edges:
            ts, hs = top.get(e.tail), top[e.head]
            if ts is None or ts == hs:
                continue
            cur = best.get(hs)
            if cur is None or reduced[e.id] < reduced[cur.id]:
                best[hs] = e
        missing = sorted(active - set(best))
        if missing:
            lost = sorted(v for s in missing for v in members[s])
            raise Unreachable(f"nodes {lost} cannot be reached from {g.root!r}")
        mins = {s: reduced[best[s].id] for s in active}
        for s, m in mins.items():
            if m:
                dual[members[s]] = dual.get(members[s], 0) + m
        for e in edges:
            ts, hs = top.get(e.tail), top[e.head]
            if ts is not None and ts != hs and mins.get(hs):
                reduced[e.id] -= mins[hs]

        pred = {s: top[best[s].tail] for s in active}
        color: dict[int, int] = {}
        cycles = []
        for s in sorted(active):
            walk = []
            u = s
            while u != ROOT and u not in color:
                color[u] = s
                walk.append(u)
                u = pred[u]
            if u != ROOT and color[u] == s:
                cycles.append(walk[walk.index(u):])
        if not cycles:
            break
        for cyc in cycles:
            c = next_id
            next_id += 1
            members[c] = frozenset().union(*(members[s] for s in cyc))
            children[c] = [(s, best[s].id) for s in cyc]
            for v in members[c]:
                top[v] = c
            active -= set(cyc)
            active.add(c)

    edge_by_id = {e.id: e for e in edges}
    parent: dict[str, str] = {}

    def expand(s: int, entering: str):
        stack = [(s, entering)]
        while stack:
            s, entering = stack.pop()
            if s not in children:
                (v,) = members[s]
                parent[v] = entering
                continue
            head = edge_by_id[entering].head
            for child, inner in children[s]:
                stack.append((child, entering if head in members[child] else inner))

    for s in active:
        expand(s, best[s].id)
    total = sum(int(g.cost[e]) for e in parent.values())
    return Branching({v: parent[v] for v in nodes}), total, dual


def arborescence_with_dual(g: CostedGraph):
    """Return ``(arborescence, cost, LaminarFamily)`` from one solve."""
    arb, total, dual = _edmonds(g)
    items = sorted(dual.items(), key=lambda kv: (len(kv[0]), sorted(kv[0])))
    return arb, total, LaminarFamily(tuple(s for s, _ in items), tuple(y for _, y in items))


def min_cost_arborescence(g: CostedGraph) -> tuple[Branching, int]:
    arb, total, _ = _edmonds(g)
    return arb, total


def laminar_dual(g: CostedGraph) -> LaminarFamily:
    return arborescence_with_dual(g)[2]


def max_cardinality_branching(nodes: Iterable[str], edges: Iterable[Edge]) -> Branching:
    """Branching with the fewest roots.

    A fresh super-root gets a cost-1 edge into every node and all original
    edges cost 0; a min-cost arborescence then pays once per tree root.
    """
    nodes = sorted(nodes)
    edges = [e for e in edges if e.tail != e.head]
    taken = set(nodes) | {e.id for e in edges}
    sroot = "__root__"
    while any(t == sroot or t.startswith(sroot + "->") for t in taken):
        sroot += "_"
    extra = [Edge(f"{sroot}->{v}", sroot, v) for v in nodes]
    cost = {e.id: 0 for e in edges}
    cost.update({e.id: 1 for e in extra})
    arb, _ = min_cost_arborescence(CostedGraph(tuple(nodes), sroot, tuple(edges + extra), cost))
    return Branching({v: (None if e.startswith(sroot + "->") else e) for v, e in arb.parent.items()})
