"""Popular arborescences via safe edges and the contraction graph.

Outline:

1. For every node v compute X_v, the fixed point of "keep what v reaches
   using safe edges", starting from V.
2. The maximal X_v sets partition V; contract each into a supernode.
3. Between supernodes keep only edges that are undominated among the
   edges entering the supernode at an entry point.
4. A popular arborescence exists iff the contracted graph is spanned
   from the root; expand it with arborescences of safe edges.

MinMargin replaces step 4 with a maximum-cardinality branching of the
contracted graph and pays one unit of margin per extra tree.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Optional

from .arborescence import max_cardinality_branching
from .errors import NotWeakRanking, Unreachable
from .instance import PARTIAL_ORDER, Branching, Edge, RootedInstance
from .popularity import DualCertificate


class SafeEdges:
    """Memoised S(X) for one rooted instance."""

    def __init__(self, rooted: RootedInstance):
        self.rooted = rooted
        self._cache: dict[frozenset, frozenset] = {}
        edge = rooted.edge
        better = rooted.better
        self._into = {}
        for v in rooted.nodes:
            ins = [edge[eid] for eid in rooted.in_edges.get(v, ()) if edge[eid].tail != v]
            self._into[v] = [(e.id, e.tail, better[e.id]) for e in ins]

    def into(self, v: str, X: frozenset) -> list[str]:
        ins = self._into[v]
        inside = [(eid, b) for eid, t, b in ins if t in X]
        if not inside:
            return []
        outside = [eid for eid, t, _ in ins if t not in X]
        inside_ids = {eid for eid, _ in inside}
        worse = self.rooted.worse
        out = []
        for eid, b in inside:
            if b & inside_ids:
                continue
            w = worse[eid]
            if all(f in w for f in outside):
                out.append(eid)
        return out

    def __call__(self, X: Iterable[str]) -> frozenset:
        X = frozenset(X)
        hit = self._cache.get(X)
        if hit is None:
            hit = frozenset(eid for v in X for eid in self.into(v, X))
            self._cache[X] = hit
        return hit


def safe_edges(rooted: RootedInstance, X: Iterable[str]) -> frozenset:
    """S(X): edges inside X undominated in E[X] that dominate all edges entering their head from outside."""
    return SafeEdges(rooted)(X)


def node_set_Xv(rooted: RootedInstance, v: str, safe: Optional[SafeEdges] = None) -> frozenset:
    safe = safe or SafeEdges(rooted)
    X = frozenset(rooted.nodes)
    while True:
        reached = frozenset(bfs_arborescence(rooted, v, safe(X))) | {v}
        if reached == X:
            return X
        X = reached


def _bfs_tree(edges: Iterable[Edge], start: str) -> dict[str, str]:
    """Parent map of the lexicographic BFS tree from ``start``; ``start`` itself is omitted."""
    adj: dict[str, list[tuple[str, str]]] = {}
    for e in edges:
        adj.setdefault(e.tail, []).append((e.id, e.head))
    parent: dict[str, str] = {}
    seen = {start}
    queue = deque([start])
    while queue:
        u = queue.popleft()
        for eid, w in sorted(adj.get(u, ())):
            if w not in seen:
                seen.add(w)
                parent[w] = eid
                queue.append(w)
    return parent


def bfs_arborescence(rooted: RootedInstance, start: str, edge_ids: Iterable[str]) -> dict[str, str]:
    edge = rooted.edge
    return _bfs_tree((edge[eid] for eid in edge_ids), start)


@dataclass
class ContractionGraph:
    """The contracted graph D'.

    Supernodes are labelled by their smallest member.  Each edge of D'
    keeps the id of its preimage in the rooted instance; ``preimage`` maps
    that id back to the original edge.
    """

    rooted: RootedInstance
    xv: dict
    supernodes: dict
    supernode_of: dict
    entry_points: dict
    edges: tuple
    preimage: dict
    safe: SafeEdges = field(repr=False)

    @property
    def root(self) -> str:
        return self.rooted.root

    @property
    def family(self) -> set:
        return set(self.xv.values())

    def safe_edges(self, label: str) -> frozenset:
        return self.safe(self.supernodes[label])

    def to_json(self) -> dict:
        return {
            "supernodes": {k: sorted(s) for k, s in sorted(self.supernodes.items())},
            "entry_points": {k: list(v) for k, v in sorted(self.entry_points.items())},
            "edges": [{"id": e.id, "tail": e.tail, "head": e.head} for e in self.edges],
        }


def build_contraction(rooted: RootedInstance) -> ContractionGraph:
    safe = SafeEdges(rooted)
    xv = {v: node_set_Xv(rooted, v, safe) for v in rooted.nodes}
    distinct = sorted(set(xv.values()), key=len, reverse=True)
    maximal: list[frozenset] = []
    for s in distinct:
        if not any(s < m for m in maximal):
            maximal.append(s)
    supernodes = {min(s): s for s in maximal}
    supernode_of = {v: label for label, s in supernodes.items() for v in s}
    entry = {label: tuple(sorted(v for v in s if xv[v] == s)) for label, s in supernodes.items()}

    edge = rooted.edge
    better = rooted.better
    edges = []
    for label, X in sorted(supernodes.items()):
        for v in entry[label]:
            into = [edge[eid] for eid in rooted.in_edges.get(v, ()) if edge[eid].tail not in X]
            ids = {e.id for e in into}
            for e in into:
                if better[e.id] & ids:
                    continue
                tail = rooted.root if e.tail == rooted.root else supernode_of[e.tail]
                edges.append(Edge(e.id, tail, label))
    edges.sort(key=lambda e: e.id)
    preimage = {e.id: edge[e.id] for e in edges}
    return ContractionGraph(rooted, xv, supernodes, supernode_of, entry, tuple(edges), preimage, safe)


def _expand(cg: ContractionGraph, entering: dict[str, str]) -> dict[str, str]:
    """Attach each supernode through ``entering[label]`` plus a safe-edge BFS tree from its entry point."""
    rooted = cg.rooted
    parent = {}
    for label, eid in entering.items():
        v = rooted.edge[eid].head
        parent[v] = eid
        parent.update(bfs_arborescence(rooted, v, cg.safe_edges(label)))
    return parent


def _certificate_sets(cg: ContractionGraph, big: Iterable[str], skip: Iterable[str]) -> tuple:
    big, skip = set(big), set(skip)
    sets = {cg.xv[v] for v in big}
    sets |= {frozenset([u]) for u in cg.rooted.nodes if u not in big and u not in skip}
    return tuple(sorted(sets, key=lambda s: (len(s), sorted(s))))


def popular_arborescence(rooted: RootedInstance, cg: Optional[ContractionGraph] = None):
    """Return ``(A, certificate)`` for a popular arborescence, or None if none exists."""
    cg = cg or build_contraction(rooted)
    tree = _bfs_tree(cg.edges, cg.root)
    if len(tree) != len(cg.supernodes):
        return None
    parent = _expand(cg, tree)
    a = Branching({v: parent[v] for v in rooted.nodes})
    heads = [rooted.edge[eid].head for eid in tree.values()]
    return a, DualCertificate(_certificate_sets(cg, heads, ()), a)


def min_margin_arborescence(rooted: RootedInstance, cg: Optional[ContractionGraph] = None):
    """Return ``(A, margin, certificate)`` with minimum unpopularity margin.

    Needs weak rankings; the problem is NP-hard for partial orders.
    """
    if rooted.classification == PARTIAL_ORDER:
        raise NotWeakRanking("minimum margin needs weak rankings at every node")
    cg = cg or build_contraction(rooted)
    nodes = list(cg.supernodes) + [cg.root]
    b = max_cardinality_branching(nodes, cg.edges)
    entering = {label: eid for label, eid in b.parent.items() if eid is not None}
    roots = [label for label, eid in b.parent.items() if eid is None and label != cg.root]
    r1 = [rooted.edge[eid].head for eid in entering.values()]
    r2 = []
    for label in roots:
        v = cg.entry_points[label][0]
        re = rooted.root_edge.get(v)
        if re is None:
            raise Unreachable(f"entry point {v!r} has no edge from the root")
        entering[label] = re
        r2.append(v)
    parent = _expand(cg, entering)
    a = Branching({v: parent[v] for v in rooted.nodes})
    margin = len(roots)
    return a, margin, DualCertificate(_certificate_sets(cg, r1, r2), a)
